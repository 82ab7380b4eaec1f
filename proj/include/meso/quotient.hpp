#pragma once

// Explored quotient of a free monoid module by a completed congruence: one
// class per normal form up to the degree budget, with action tables, absorbing
// class detection, localization at a monoid prime, Green's preorder and unit
// stabilizer lattices.

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "meso/congruence.hpp"
#include "meso/errors.hpp"
#include "meso/lattice.hpp"

namespace meso {

struct ModuleElementLess {
  bool operator()(const ModuleElement& a, const ModuleElement& b) const {
    return module_element_less(a, b);
  }
};

struct FiniteQuotient {
  static constexpr std::uint32_t kFrontier = std::numeric_limits<std::uint32_t>::max();

  RewriteSystem rewriter;
  std::size_t nvars = 0;
  std::size_t ngens = 0;
  std::vector<ModuleElement> reps;  // normal forms in breadth first order
  std::map<ModuleElement, std::uint32_t, ModuleElementLess> index;
  std::vector<std::vector<std::uint32_t>> act;  // [coordinate][class]
  std::vector<bool> is_nil;                     // absorbing classes
  bool complete = true;

  std::uint32_t class_of(const ModuleElement& m) const {
    auto it = index.find(rewriter.normal_form(m));
    return it == index.end() ? kFrontier : it->second;
  }
};

inline FiniteQuotient explore_quotient(RewriteSystem rs, const Budget& budget) {
  FiniteQuotient q;
  q.rewriter = std::move(rs);
  q.nvars = q.rewriter.nvars();
  q.ngens = q.rewriter.ngens();
  q.act.resize(q.nvars);

  std::deque<std::uint32_t> work;
  auto intern = [&](const ModuleElement& nf) {
    auto it = q.index.find(nf);
    if (it != q.index.end()) return it->second;
    if (q.reps.size() >= budget.max_classes)
      throw BudgetExceeded("quotient exploration exceeded its class budget");
    auto id = static_cast<std::uint32_t>(q.reps.size());
    q.reps.push_back(nf);
    q.index.emplace(nf, id);
    for (auto& col : q.act) col.push_back(FiniteQuotient::kFrontier);
    work.push_back(id);
    return id;
  };

  for (std::uint32_t g = 0; g < q.ngens; ++g)
    intern(q.rewriter.normal_form(ModuleElement{g, Exponent(q.nvars, 0)}));

  while (!work.empty()) {
    std::uint32_t c = work.front();
    work.pop_front();
    for (std::size_t k = 0; k < q.nvars; ++k) {
      ModuleElement next{q.reps[c].gen, q.reps[c].degree + unit_exponent(q.nvars, k)};
      ModuleElement nf = q.rewriter.normal_form(next);
      if (total_degree(nf.degree) > budget.degree) {
        q.complete = false;  // leave the frontier marker in place
      } else {
        q.act[k][c] = intern(nf);
      }
    }
  }

  // Nil classes are those containing a declared absorbing cone. A class every
  // coordinate fixes is not nil by itself: identifying a generator with its
  // own translate produces such classes and they carry ordinary structure.
  q.is_nil.assign(q.reps.size(), false);
  for (const auto& seed : q.rewriter.nil_seeds()) {
    std::uint32_t c = q.class_of(seed);
    if (c != FiniteQuotient::kFrontier) q.is_nil[c] = true;
  }
  return q;
}

// Quotient classes after inverting the coordinates outside a prime. Two
// classes merge exactly when some inverted translate of both is the same
// class; on fully explored tables this is precisely the kernel of the
// localization map. Frontier entries stay as markers and the truncated flag
// records that unexplored classes may exist beyond them.
struct LocalizedQuotient {
  LocalizationContext ctx;
  std::vector<std::uint32_t> to_local;  // base class -> local class
  std::vector<std::uint32_t> local_rep; // local class -> first base class
  std::vector<std::vector<std::uint32_t>> act;      // [coordinate][local class]
  std::vector<std::vector<std::uint32_t>> act_inv;  // inverted coordinates only
  std::vector<bool> is_nil;
  bool truncated = false;

  std::size_t size() const { return local_rep.size(); }
};

inline LocalizedQuotient localize(const FiniteQuotient& q, const MonoidPrime& prime) {
  const std::size_t m = q.reps.size();
  std::vector<std::uint32_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); };

  LocalizedQuotient loc;
  loc.ctx = LocalizationContext(q.nvars, prime);
  loc.truncated = !q.complete;

  // Fixpoint of two closure rules: classes with a common inverted translate
  // merge, and merged classes propagate along every action. The second rule
  // is implied by the first on complete tables but keeps truncated tables
  // consistent.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < q.nvars; ++k) {
      bool inv = loc.ctx.inverted(k);
      std::map<std::uint32_t, std::uint32_t> by_target, by_source;
      for (std::uint32_t u = 0; u < m; ++u) {
        std::uint32_t t = q.act[k][u];
        if (t == FiniteQuotient::kFrontier) continue;
        if (inv) {
          auto [it, fresh] = by_target.emplace(find(t), find(u));
          if (!fresh && find(it->second) != find(u)) {
            unite(it->second, u);
            changed = true;
          }
        }
        auto [jt, fresh2] = by_source.emplace(find(u), find(t));
        if (!fresh2 && find(jt->second) != find(t)) {
          unite(jt->second, t);
          changed = true;
        }
      }
    }
  }

  loc.to_local.assign(m, 0);
  std::map<std::uint32_t, std::uint32_t> root_to_local;
  for (std::uint32_t u = 0; u < m; ++u) {
    std::uint32_t r = find(u);
    auto [it, fresh] = root_to_local.emplace(r, static_cast<std::uint32_t>(loc.local_rep.size()));
    if (fresh) loc.local_rep.push_back(u);
    loc.to_local[u] = it->second;
  }

  const std::size_t nloc = loc.local_rep.size();
  loc.act.assign(q.nvars, std::vector<std::uint32_t>(nloc, FiniteQuotient::kFrontier));
  for (std::size_t k = 0; k < q.nvars; ++k)
    for (std::uint32_t u = 0; u < m; ++u) {
      std::uint32_t t = q.act[k][u];
      if (t == FiniteQuotient::kFrontier) continue;
      std::uint32_t& slot = loc.act[k][loc.to_local[u]];
      if (slot == FiniteQuotient::kFrontier) slot = loc.to_local[t];
      else if (slot != loc.to_local[t])
        throw InternalInconsistency("localization action not constant on classes");
    }

  loc.act_inv.assign(q.nvars, {});
  for (std::size_t k = 0; k < q.nvars; ++k) {
    if (!loc.ctx.inverted(k)) continue;
    loc.act_inv[k].assign(nloc, FiniteQuotient::kFrontier);
    for (std::uint32_t c = 0; c < nloc; ++c) {
      std::uint32_t t = loc.act[k][c];
      if (t == FiniteQuotient::kFrontier) continue;
      if (loc.act_inv[k][t] != FiniteQuotient::kFrontier && loc.act_inv[k][t] != c)
        throw InternalInconsistency("inverted action is not injective on local classes");
      loc.act_inv[k][t] = c;
    }
  }

  // local classes inherit nil status from the base classes they absorb
  loc.is_nil.assign(nloc, false);
  for (std::uint32_t u = 0; u < m; ++u)
    if (q.is_nil[u]) loc.is_nil[loc.to_local[u]] = true;
  return loc;
}

// Green's preorder on local classes: u <= v when v lies in the orbit of u
// under the action monoid (inverted coordinates move both ways). Absorbing
// classes are maximal.
inline bool green_leq(const LocalizedQuotient& loc, std::uint32_t from, std::uint32_t to) {
  std::vector<bool> seen(loc.size(), false);
  std::deque<std::uint32_t> work{from};
  seen[from] = true;
  while (!work.empty()) {
    std::uint32_t c = work.front();
    work.pop_front();
    if (c == to) return true;
    auto push = [&](std::uint32_t t) {
      if (t != FiniteQuotient::kFrontier && !seen[t]) {
        seen[t] = true;
        work.push_back(t);
      }
    };
    for (std::size_t k = 0; k < loc.act.size(); ++k) {
      push(loc.act[k][c]);
      if (!loc.act_inv[k].empty()) push(loc.act_inv[k][c]);
    }
  }
  return false;
}

inline bool green_equivalent(const LocalizedQuotient& loc, std::uint32_t a, std::uint32_t b) {
  return green_leq(loc, a, b) && green_leq(loc, b, a);
}

// Stabilizer of a local class inside the unit group Z^(inverted coordinates),
// by orbit traversal: spanning tree translation vectors plus one lattice
// generator per closing edge. The orbit size is the explored part only when
// the traversal runs into a frontier.
struct StabilizerResult {
  IntMat lattice;  // Hermite normal form rows, one column per inverted coordinate
  std::size_t orbit_size = 0;
  bool orbit_truncated = false;
};

inline StabilizerResult unit_stabilizer(const LocalizedQuotient& loc, std::uint32_t cls) {
  std::vector<std::size_t> coords = loc.ctx.inverted_coords();
  const std::size_t d = coords.size();
  StabilizerResult res;

  std::map<std::uint32_t, IntVec> vec;
  vec.emplace(cls, IntVec(d, 0));
  std::deque<std::uint32_t> work{cls};
  IntMat closing;
  while (!work.empty()) {
    std::uint32_t c = work.front();
    work.pop_front();
    for (std::size_t i = 0; i < d; ++i) {
      for (int dir : {+1, -1}) {
        const auto& table = dir > 0 ? loc.act[coords[i]] : loc.act_inv[coords[i]];
        std::uint32_t t = table[c];
        if (t == FiniteQuotient::kFrontier) {
          res.orbit_truncated = true;
          continue;
        }
        IntVec cand = vec[c];
        cand[i] += dir;
        auto [it, fresh] = vec.emplace(t, cand);
        if (fresh) {
          work.push_back(t);
        } else {
          IntVec diff(d);
          bool zero = true;
          for (std::size_t j = 0; j < d; ++j) {
            diff[j] = cand[j] - it->second[j];
            if (diff[j] != 0) zero = false;
          }
          if (!zero) closing.push_back(std::move(diff));
        }
      }
    }
  }
  res.orbit_size = vec.size();
  res.lattice = lattice_hnf(closing);
  return res;
}

// True when the non absorbing classes form a single component of the
// undirected action graph. On truncated quotients this only speaks about the
// explored region.
inline bool properly_connected(const FiniteQuotient& q) {
  const std::size_t m = q.reps.size();
  std::vector<std::uint32_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::uint32_t u = 0; u < m; ++u) {
    if (q.is_nil[u]) continue;
    for (std::size_t k = 0; k < q.nvars; ++k) {
      std::uint32_t t = q.act[k][u];
      if (t != FiniteQuotient::kFrontier && !q.is_nil[t]) parent[find(u)] = find(t);
    }
  }
  std::size_t components = 0;
  for (std::uint32_t u = 0; u < m; ++u)
    if (!q.is_nil[u] && find(u) == u) ++components;
  return components <= 1;
}

// Kernel of q -> q.cls as a congruence on N^n, presented by the first
// exponent reaching each orbit class: later arrivals become pairs, absorbing
// arrivals become nil generators.
inline CongruencePresentation orbit_kernel(const FiniteQuotient& q, std::uint32_t cls) {
  CongruencePresentation out;
  out.nvars = q.nvars;
  out.ngens = 1;

  std::map<std::uint32_t, Exponent> rep;
  rep.emplace(cls, Exponent(q.nvars, 0));
  std::deque<std::uint32_t> work{cls};
  while (!work.empty()) {
    std::uint32_t c = work.front();
    work.pop_front();
    for (std::size_t k = 0; k < q.nvars; ++k) {
      Exponent next = rep[c] + unit_exponent(q.nvars, k);
      std::uint32_t t = q.act[k][c];
      if (t == FiniteQuotient::kFrontier)
        throw BudgetExceeded("orbit runs into the exploration frontier");
      auto [it, fresh] = rep.emplace(t, next);
      if (fresh) {
        if (q.is_nil[t]) out.nils.push_back(ModuleElement{0, next});
        else work.push_back(t);
      } else if (it->second != next) {
        out.pairs.push_back({ModuleElement{0, next}, ModuleElement{0, it->second}});
      }
    }
  }
  return out;
}

}  // namespace meso
