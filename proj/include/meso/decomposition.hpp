#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "meso/congruence.hpp"
#include "meso/errors.hpp"
#include "meso/exponents.hpp"
#include "meso/quotient.hpp"
#include "meso/witnesses.hpp"

namespace meso {

// One coprincipal component of a congruence: the coarsening cogenerated by a
// key witness at a prime. Classes outside the witness order ideal collapse
// into a single absorbing class, recorded as kOutside; the remaining classes
// are grouped into blocks numbered by first appearance.
struct CoprincipalComponent {
  static constexpr std::uint32_t kOutside = std::numeric_limits<std::uint32_t>::max();

  MonoidPrime prime;
  std::uint32_t witness = 0;            // local class in the localization at prime
  std::vector<std::uint32_t> block;     // source class -> block id, kOutside if collapsed
  std::size_t nblocks = 0;
};

namespace detail {

// All local pairs (u, v) admitting a common translate q with q u = q v = w,
// by reverse search from the diagonal pair (w, w). Moves act on both entries
// at once; inverted coordinates contribute their inverse step as well.
inline std::unordered_set<std::uint64_t> pairs_reaching(const LocalizedQuotient& loc,
                                                        std::uint32_t w) {
  const std::uint32_t n = static_cast<std::uint32_t>(loc.size());
  auto key = [n](std::uint32_t u, std::uint32_t v) {
    return static_cast<std::uint64_t>(u) * n + v;
  };

  std::vector<std::vector<std::vector<std::uint32_t>>> pre(loc.act.size());
  for (std::size_t k = 0; k < loc.act.size(); ++k) {
    pre[k].assign(n, {});
    for (std::uint32_t u = 0; u < n; ++u)
      if (loc.act[k][u] != FiniteQuotient::kFrontier) pre[k][loc.act[k][u]].push_back(u);
  }

  std::unordered_set<std::uint64_t> seen;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> work;
  auto visit = [&](std::uint32_t u, std::uint32_t v) {
    if (seen.insert(key(u, v)).second) work.emplace_back(u, v);
  };
  visit(w, w);
  while (!work.empty()) {
    auto [u, v] = work.front();
    work.pop_front();
    for (std::size_t k = 0; k < loc.act.size(); ++k) {
      for (std::uint32_t pu : pre[k][u])
        for (std::uint32_t pv : pre[k][v]) visit(pu, pv);
      if (!loc.act_inv[k].empty()) {
        // the predecessor under the inverse step x_k^{-1} is the x_k image
        std::uint32_t pu = loc.act[k][u], pv = loc.act[k][v];
        if (pu != FiniteQuotient::kFrontier && pv != FiniteQuotient::kFrontier) visit(pu, pv);
      }
    }
  }
  return seen;
}

}  // namespace detail

// The congruence cogenerated by a witness: inside the order ideal of w two
// classes are identified exactly when some common translate takes both to w,
// and everything outside the ideal joins one absorbing class. The result is
// already closed under the action; if closing it were to swallow part of the
// order ideal the component description would be inconsistent, so that aborts.
inline CoprincipalComponent coprincipal_component(const FiniteQuotient& q,
                                                  const LocalizedQuotient& loc,
                                                  std::uint32_t witness) {
  const std::uint32_t n = static_cast<std::uint32_t>(loc.size());
  std::vector<bool> ideal(n, false);
  for (std::uint32_t c = 0; c < n; ++c)
    if (!loc.is_nil[c] && green_leq(loc, c, witness)) ideal[c] = true;

  auto reach = detail::pairs_reaching(loc, witness);
  auto paired = [&](std::uint32_t u, std::uint32_t v) {
    return reach.count(static_cast<std::uint64_t>(u) * n + v) != 0;
  };

  // union-find over the local classes plus one virtual outside node
  const std::uint32_t outside = n;
  std::vector<std::uint32_t> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); };

  for (std::uint32_t c = 0; c < n; ++c)
    if (!ideal[c]) unite(c, outside);
  for (std::uint32_t u = 0; u < n; ++u) {
    if (!ideal[u]) continue;
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (ideal[v] && paired(u, v)) unite(u, v);
  }

  // close under the action so identified classes keep identified images
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < loc.act.size(); ++k) {
      std::map<std::uint32_t, std::uint32_t> by_source;
      for (std::uint32_t u = 0; u < n; ++u) {
        std::uint32_t t = loc.act[k][u];
        if (t == FiniteQuotient::kFrontier) continue;
        auto [it, fresh] = by_source.emplace(find(u), find(t));
        if (!fresh && find(it->second) != find(t)) {
          unite(it->second, t);
          changed = true;
        }
      }
    }
  }

  for (std::uint32_t c = 0; c < n; ++c)
    if (ideal[c] && find(c) == find(outside))
      throw InternalInconsistency("coprincipal closure swallowed part of the order ideal");

  CoprincipalComponent comp;
  comp.witness = witness;
  comp.block.assign(q.reps.size(), CoprincipalComponent::kOutside);
  std::map<std::uint32_t, std::uint32_t> root_to_block;
  for (std::size_t c = 0; c < q.reps.size(); ++c) {
    std::uint32_t r = find(loc.to_local[c]);
    if (r == find(outside)) continue;
    auto [it, fresh] = root_to_block.emplace(r, static_cast<std::uint32_t>(comp.nblocks));
    if (fresh) ++comp.nblocks;
    comp.block[c] = it->second;
  }
  return comp;
}

// Generators for a component as a congruence in its own right: the source
// generators, one pair per extra identification inside a block, and the
// collapsed complement chained together behind a single absorbing class.
inline CongruencePresentation component_presentation(const CongruencePresentation& source,
                                                     const FiniteQuotient& q,
                                                     const CoprincipalComponent& comp) {
  CongruencePresentation out = source;
  std::map<std::uint32_t, std::uint32_t> block_rep;
  std::vector<std::uint32_t> collapsed;
  for (std::uint32_t c = 0; c < q.reps.size(); ++c) {
    std::uint32_t b = comp.block[c];
    if (b == CoprincipalComponent::kOutside) {
      collapsed.push_back(c);
      continue;
    }
    auto [it, fresh] = block_rep.emplace(b, c);
    if (!fresh) out.pairs.push_back({q.reps[it->second], q.reps[c]});
  }
  for (std::size_t i = 1; i < collapsed.size(); ++i)
    out.pairs.push_back({q.reps[collapsed[0]], q.reps[collapsed[i]]});
  if (!collapsed.empty()) out.nils.push_back(q.reps[collapsed[0]]);
  return out;
}

// Mesoprimary decomposition at the congruence level: one coprincipal
// component per key witness over every prime, with duplicate partitions
// produced by translate witnesses kept only once.
inline std::vector<CoprincipalComponent> mesoprimary_decomposition(const FiniteQuotient& q) {
  std::vector<CoprincipalComponent> out;
  for (const auto& prime : enumerate_primes(q.nvars)) {
    PrimeWitnesses pw = find_witnesses(q, prime);
    if (pw.key_witnesses.empty()) continue;
    LocalizedQuotient loc = localize(q, prime);
    for (std::uint32_t w : pw.key_witnesses) {
      CoprincipalComponent comp = coprincipal_component(q, loc, w);
      comp.prime = prime;
      bool dup = false;
      for (const auto& other : out)
        if (other.block == comp.block) dup = true;
      if (!dup) out.push_back(std::move(comp));
    }
  }
  return out;
}

// Check that the components cut the source congruence back out: every
// non-absorbing class must appear in some component, and any two distinct
// non-absorbing classes must land in different blocks of some component.
inline bool decomposition_refines_exactly(const FiniteQuotient& q,
                                          const std::vector<CoprincipalComponent>& comps) {
  const std::uint32_t m = static_cast<std::uint32_t>(q.reps.size());
  for (std::uint32_t u = 0; u < m; ++u) {
    if (q.is_nil[u]) continue;
    bool covered = false;
    for (const auto& comp : comps)
      if (comp.block[u] != CoprincipalComponent::kOutside) covered = true;
    if (!covered) return false;
    for (std::uint32_t v = u + 1; v < m; ++v) {
      if (q.is_nil[v]) continue;
      bool separated = false;
      for (const auto& comp : comps)
        if (comp.block[u] != comp.block[v]) separated = true;
      if (!separated) return false;
    }
  }
  return true;
}

}  // namespace meso
