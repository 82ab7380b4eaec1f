#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <utility>
#include <vector>

#include "meso/character.hpp"
#include "meso/graded.hpp"
#include "meso/groebner.hpp"
#include "meso/mesoprime.hpp"
#include "meso/quotient.hpp"
#include "meso/witnesses.hpp"

namespace meso {

// One coprincipal piece of a binomial submodule: the submodule it cuts out,
// the mesoprime it is primary to, and the class it was cogenerated at.
struct BinomialComponent {
  Mesoprime mesoprime;
  std::uint32_t witness = 0;        // base class of the cogenerating witness
  std::vector<PolyVector> module;   // reduced basis
  // set when some gluing binomial is not already a consequence of the
  // mesoprime ideal acting on the module, as with cross generator gluings
  bool gluing_exceeds_mesoprime = false;
};

struct BinomialMesoDecomposition {
  std::vector<BinomialComponent> components;
  // the first pass uses essential witnesses only; when their intersection
  // misses the module the decomposition falls back to every witness
  bool used_all_witnesses = false;
};

namespace detail {

// For each local pair (u, v) sharing a translate into w, one witnessing
// shift q with x^q u = x^q v = w, found by reverse search from the diagonal
// (w, w). Entries of q can be negative only on inverted coordinates.
inline std::unordered_map<std::uint64_t, std::vector<std::int64_t>> pair_translates(
    const LocalizedQuotient& loc, std::size_t nvars, std::uint32_t w) {
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

  std::unordered_map<std::uint64_t, std::vector<std::int64_t>> shift;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> work;
  auto visit = [&](std::uint32_t u, std::uint32_t v, std::vector<std::int64_t> s) {
    if (shift.emplace(key(u, v), std::move(s)).second) work.emplace_back(u, v);
  };
  visit(w, w, std::vector<std::int64_t>(nvars, 0));
  while (!work.empty()) {
    auto [u, v] = work.front();
    work.pop_front();
    const std::vector<std::int64_t> s = shift.at(key(u, v));  // copy, the map may grow
    for (std::size_t k = 0; k < loc.act.size(); ++k) {
      std::vector<std::int64_t> back = s;
      ++back[k];
      for (std::uint32_t pu : pre[k][u])
        for (std::uint32_t pv : pre[k][v]) visit(pu, pv, back);
      if (!loc.act_inv[k].empty()) {
        // the predecessor under the inverse step x_k^{-1} is the x_k image
        std::uint32_t fu = loc.act[k][u], fv = loc.act[k][v];
        if (fu != FiniteQuotient::kFrontier && fv != FiniteQuotient::kFrontier) {
          std::vector<std::int64_t> fwd = s;
          --fwd[k];
          visit(fu, fv, std::move(fwd));
        }
      }
    }
  }
  return shift;
}

}  // namespace detail

// The coprincipal submodule cogenerated at a witness: on top of the source
// generators, one binomial for every pair of classes sharing a translate
// into the witness, with its coefficient read off from the graded values at
// that translate, and one monomial for each class outside the witness order
// ideal, everything pulled back through the localization.
inline BinomialComponent coprincipal_submodule(const GradedModule& g, const FiniteQuotient& t,
                                               const LocalizedQuotient& loc,
                                               std::uint32_t local_w,
                                               const Budget& budget = Budget{}) {
  const std::uint32_t n = static_cast<std::uint32_t>(loc.size());
  BinomialComponent comp;
  comp.mesoprime = character_at(g, t, loc, local_w, budget);
  comp.witness = loc.local_rep[local_w];

  std::vector<bool> ideal(n, false);
  for (std::uint32_t c = 0; c < n; ++c)
    if (!loc.is_nil[c] && green_leq(loc, c, local_w)) ideal[c] = true;

  auto shifts = detail::pair_translates(loc, t.nvars, local_w);
  std::vector<PolyVector> gens = g.basis;
  std::vector<PolyVector> gluings;

  const std::uint32_t m = static_cast<std::uint32_t>(t.reps.size());
  for (std::uint32_t u = 0; u < m; ++u) {
    if (t.is_nil[u] || !ideal[loc.to_local[u]]) continue;
    for (std::uint32_t v = u + 1; v < m; ++v) {
      if (t.is_nil[v] || !ideal[loc.to_local[v]]) continue;
      auto it = shifts.find(static_cast<std::uint64_t>(loc.to_local[u]) * n + loc.to_local[v]);
      if (it == shifts.end()) continue;
      Exponent qplus(t.nvars, 0);
      for (std::size_t k = 0; k < t.nvars; ++k)
        if (it->second[k] > 0) qplus[k] = it->second[k];
      // the negative part of the shift is a unit, so the positive part
      // already lands both classes in one local class
      Cyclo ratio = local_ratio(g, t, loc,
                                ModuleElement{t.reps[u].gen, t.reps[u].degree + qplus},
                                ModuleElement{t.reps[v].gen, t.reps[v].degree + qplus}, budget);
      gluings.push_back(
          PolyVector::from_terms({Term{Cyclo(1), t.reps[u]}, Term{-ratio, t.reps[v]}}, g.order));
    }
  }
  for (const auto& b : gluings) gens.push_back(b);

  std::vector<ModuleElement> outside;
  for (std::uint32_t c = 0; c < m; ++c)
    if (t.is_nil[c] || !ideal[loc.to_local[c]]) outside.push_back(t.reps[c]);
  std::vector<PolyVector> monomials;
  for (std::size_t i = 0; i < outside.size(); ++i) {
    // keep one representative of each group equal up to inverted coordinates
    bool redundant = false;
    for (std::size_t j = 0; j < outside.size() && !redundant; ++j) {
      if (j == i || !divides(outside[j], outside[i], &loc.ctx)) continue;
      if (j < i || !divides(outside[i], outside[j], &loc.ctx)) redundant = true;
    }
    if (redundant) continue;
    monomials.push_back(PolyVector::from_terms({Term{Cyclo(1), outside[i]}}, g.order));
  }
  for (const auto& mono : monomials) gens.push_back(mono);

  comp.module = localization_preimage(gens, loc.ctx, t.ngens, budget);

  if (!gluings.empty()) {
    // would the mesoprime ideal acting on the module have glued the same?
    std::vector<PolyVector> without = g.basis;
    for (auto& b : mesoprime_ideal(comp.mesoprime, t.nvars, t.ngens, budget))
      without.push_back(std::move(b));
    for (const auto& mono : monomials) without.push_back(mono);
    without = localization_preimage(without, loc.ctx, t.ngens, budget);
    for (const auto& b : gluings)
      if (!normal_form(b, without, g.order).is_zero()) comp.gluing_exceeds_mesoprime = true;
  }
  return comp;
}

namespace detail {

inline std::vector<BinomialComponent> assemble_components(const GradedModule& g,
                                                          const FiniteQuotient& t,
                                                          bool all_witnesses,
                                                          const Budget& budget) {
  std::vector<BinomialComponent> out;
  for (const auto& prime : enumerate_primes(t.nvars)) {
    std::vector<std::uint32_t> locals;
    LocalizedQuotient loc;
    if (all_witnesses) {
      PrimeWitnesses pw = find_witnesses(t, prime);
      if (pw.witnesses.empty()) continue;
      loc = std::move(pw.loc);
      locals = std::move(pw.witnesses);
    } else {
      std::vector<std::uint32_t> base = essential_witnesses(g, t, prime, budget);
      if (base.empty()) continue;
      loc = localize(t, prime);
      for (std::uint32_t w : base) {
        std::uint32_t lw = loc.to_local[w];
        bool seen = false;
        for (std::uint32_t other : locals) seen |= other == lw;
        if (!seen) locals.push_back(lw);
      }
    }
    for (std::uint32_t lw : locals) {
      BinomialComponent comp = coprincipal_submodule(g, t, loc, lw, budget);
      bool dup = false;
      for (const auto& other : out) dup |= other.module == comp.module;
      if (!dup) out.push_back(std::move(comp));
    }
  }
  return out;
}

inline bool recombines(const GradedModule& g, const std::vector<BinomialComponent>& comps,
                       const Budget& budget) {
  std::vector<PolyVector> meet;
  for (std::uint32_t j = 0; j < g.rank; ++j)
    meet.push_back(PolyVector::from_terms(
        {Term{Cyclo(1), ModuleElement{j, Exponent(g.nvars, 0)}}}, g.order));
  for (const auto& c : comps) meet = intersect_submodules(meet, c.module, g.nvars, budget);
  return equal_submodules(meet, g.basis, g.order, budget);
}

}  // namespace detail

// Mesoprimary decomposition of the binomial submodule behind a graded
// module: coprincipal submodules at the essential witnesses, verified by
// intersecting back; if the essential pass misses, every witness is used.
inline BinomialMesoDecomposition binomial_mesoprimary_decomposition(
    const GradedModule& g, const FiniteQuotient& t, const Budget& budget = Budget{}) {
  BinomialMesoDecomposition dec;
  dec.components = detail::assemble_components(g, t, false, budget);
  if (detail::recombines(g, dec.components, budget)) return dec;
  dec.components = detail::assemble_components(g, t, true, budget);
  dec.used_all_witnesses = true;
  if (detail::recombines(g, dec.components, budget)) return dec;
  throw VerificationFailure("mesoprimary components do not intersect back to the module");
}

// One primary piece of a mesoprimary component: the submodule together with
// the character extension that cuts it out.
struct PrimaryComponent {
  Mesoprime character;   // same prime, with the extended lattice and values
  std::vector<PolyVector> module;
};

// Refine one mesoprimary component into primary components by extending its
// character to the saturation of its lattice, enlarging the coefficient
// field as far as the needed roots of unity demand. Unrealizable radicals
// surface as MissingRoot with order zero.
inline std::vector<PrimaryComponent> binomial_primary_components(
    const BinomialComponent& comp, std::size_t nvars, std::size_t rank,
    const Budget& budget = Budget{}) {
  MonomialOrder ord{};
  const Mesoprime& mp = comp.mesoprime;
  LocalizationContext ctx(nvars, mp.prime);
  Character rho = make_character(ctx.inverted_coords().size(), mp.lattice, mp.values);

  std::uint64_t field = character_field_order(rho);
  std::vector<Character> extensions;
  for (;;) {
    try {
      extensions = character_extensions(rho, field);
      break;
    } catch (const MissingRoot& e) {
      if (e.cyclotomic_order <= field) throw;
      field = e.cyclotomic_order;
    }
  }

  std::vector<PrimaryComponent> out;
  for (const Character& chi : extensions) {
    PrimaryComponent pc;
    pc.character = Mesoprime{mp.prime, chi.basis, chi.values, comp.witness};
    std::vector<PolyVector> gens = comp.module;
    for (auto& b : character_binomials(mp.prime, chi.basis, chi.values, nvars, rank, budget))
      gens.push_back(std::move(b));
    pc.module = buchberger(gens, ord, budget);
    out.push_back(std::move(pc));
  }

  std::vector<PolyVector> meet;
  for (std::uint32_t j = 0; j < rank; ++j)
    meet.push_back(
        PolyVector::from_terms({Term{Cyclo(1), ModuleElement{j, Exponent(nvars, 0)}}}, ord));
  for (const auto& pc : out) meet = intersect_submodules(meet, pc.module, nvars, budget);
  if (!equal_submodules(meet, comp.module, ord, budget))
    throw VerificationFailure("primary components do not intersect back to their component");
  return out;
}

}  // namespace meso
