#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "meso/errors.hpp"
#include "meso/exponents.hpp"
#include "meso/graded.hpp"
#include "meso/groebner.hpp"
#include "meso/lattice.hpp"
#include "meso/quotient.hpp"
#include "meso/witnesses.hpp"

namespace meso {

// A monoid prime together with a character of the local unit group along the
// stabilizer of a witness class. The lattice rows are in Hermite form with one
// column per inverted coordinate, and values[r] is the ratio the module
// coefficients pick up when translating by row r.
struct Mesoprime {
  MonoidPrime prime;
  IntMat lattice;
  std::vector<Cyclo> values;
  std::uint32_t witness = 0;  // base class where the character was read off

  // the witness is provenance, not identity
  friend bool operator==(const Mesoprime& a, const Mesoprime& b) {
    return a.prime == b.prime && a.lattice == b.lattice && a.values == b.values;
  }
};

namespace detail {

inline std::int64_t small_int(const Int& v) {
  if (!v.fits_slong_p()) throw BudgetExceeded("stabilizer offset exceeds the exponent range");
  return v.get_si();
}

}  // namespace detail

inline bool mesoprime_less(const Mesoprime& a, const Mesoprime& b) {
  if (!(a.prime == b.prime)) return prime_less(a.prime, b.prime);
  if (a.lattice != b.lattice) return a.lattice < b.lattice;
  std::vector<std::string> va, vb;
  for (const auto& v : a.values) va.push_back(v.to_string());
  for (const auto& v : b.values) vb.push_back(v.to_string());
  return va < vb;
}

// Reads the character of the unit group at a local class: each stabilizer row
// moves the class to itself, so the two translates of the representative sit
// in one degree and their coefficient ratio is well defined.
inline Mesoprime character_at(const GradedModule& g, const FiniteQuotient& t,
                              const LocalizedQuotient& loc, std::uint32_t local_cls,
                              const Budget& budget = Budget{}) {
  if (loc.is_nil[local_cls]) throw InputError("characters live at non-nil classes");
  Mesoprime mp;
  mp.prime = loc.ctx.prime;
  mp.lattice = unit_stabilizer(loc, local_cls).lattice;
  mp.witness = loc.local_rep[local_cls];

  const std::vector<std::size_t> coords = loc.ctx.inverted_coords();
  const ModuleElement& w = t.reps[loc.local_rep[local_cls]];
  auto ratio_of = [&](const IntVec& row) {
    Exponent plus(t.nvars, 0), minus(t.nvars, 0);
    for (std::size_t i = 0; i < coords.size(); ++i) {
      std::int64_t e = detail::small_int(row[i]);
      if (e > 0) plus[coords[i]] = e;
      else minus[coords[i]] = -e;
    }
    return local_ratio(g, t, loc, ModuleElement{w.gen, w.degree + plus},
                       ModuleElement{w.gen, w.degree + minus}, budget);
  };
  for (const auto& row : mp.lattice) mp.values.push_back(ratio_of(row));

  // a character must be multiplicative, which the pairwise sums can see
  for (std::size_t i = 0; i < mp.lattice.size(); ++i)
    for (std::size_t j = i; j < mp.lattice.size(); ++j) {
      IntVec sum = mp.lattice[i];
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += mp.lattice[j][k];
      if (!(ratio_of(sum) == mp.values[i] * mp.values[j]))
        throw InternalInconsistency("stabilizer character is not multiplicative");
    }
  return mp;
}

// Binomials x^u - chi(u) x^v on every generator, one per lattice row, closed
// under the units the prime inverts. This is the character part of the ideal;
// the prime's own monomials are not included.
inline std::vector<PolyVector> character_binomials(const MonoidPrime& prime,
                                                   const IntMat& lattice,
                                                   const std::vector<Cyclo>& values,
                                                   std::size_t nvars, std::size_t rank,
                                                   const Budget& budget = Budget{}) {
  MonomialOrder ord{};
  LocalizationContext ctx(nvars, prime);
  const std::vector<std::size_t> coords = ctx.inverted_coords();

  std::vector<PolyVector> gens;
  for (std::size_t r = 0; r < lattice.size(); ++r) {
    Exponent plus(nvars, 0), minus(nvars, 0);
    for (std::size_t i = 0; i < coords.size(); ++i) {
      std::int64_t e = detail::small_int(lattice[r][i]);
      if (e > 0) plus[coords[i]] = e;
      else minus[coords[i]] = -e;
    }
    for (std::uint32_t j = 0; j < rank; ++j)
      gens.push_back(PolyVector::from_terms({Term{Cyclo(1), ModuleElement{j, plus}},
                                             Term{-values[r], ModuleElement{j, minus}}},
                                            ord));
  }
  return saturate_by_vars(gens, coords, nvars, rank, budget);
}

// The binomial ideal cutting out a mesoprime: the character binomials plus
// the monomials of the prime itself, on every generator of the ambient free
// module.
inline std::vector<PolyVector> mesoprime_ideal(const Mesoprime& mp, std::size_t nvars,
                                               std::size_t rank,
                                               const Budget& budget = Budget{}) {
  MonomialOrder ord{};
  std::vector<PolyVector> out =
      character_binomials(mp.prime, mp.lattice, mp.values, nvars, rank, budget);
  for (auto p : mp.prime.coords) {
    Exponent e = unit_exponent(nvars, p);
    for (std::uint32_t j = 0; j < rank; ++j)
      out.push_back(PolyVector::from_terms({Term{Cyclo(1), ModuleElement{j, e}}}, ord));
  }
  return buchberger(out, ord, budget);
}

// Base classes where some element annihilated by the prime after localizing
// is concentrated in a minimal degree. Witnesses found this way pin the
// characters that matter; the other witnesses only repeat them.
inline std::vector<std::uint32_t> essential_witnesses(const GradedModule& g,
                                                      const FiniteQuotient& t,
                                                      const MonoidPrime& prime,
                                                      const Budget& budget = Budget{}) {
  PrimeWitnesses pw = find_witnesses(t, prime);
  if (pw.witnesses.empty()) return {};
  std::vector<bool> is_witness(pw.loc.size(), false);
  for (auto w : pw.witnesses) is_witness[w] = true;

  LocalizationContext ctx(t.nvars, prime);
  std::vector<PolyVector> sat = localization_preimage(g.basis, ctx, t.ngens, budget);

  // elements killed by every coordinate of the prime, as a reduced basis
  std::vector<PolyVector> ann;
  if (prime.coords.empty()) {
    for (std::uint32_t j = 0; j < t.ngens; ++j)
      ann.push_back(PolyVector::from_terms(
          {Term{Cyclo(1), ModuleElement{j, Exponent(t.nvars, 0)}}}, g.order));
  } else {
    bool first = true;
    for (auto p : prime.coords) {
      std::vector<PolyVector> col =
          colon_by_monomial(sat, unit_exponent(t.nvars, p), t.nvars, t.ngens, budget);
      if (first) {
        ann = std::move(col);
        first = false;
      } else {
        ann = intersect_submodules(ann, col, t.nvars, budget);
      }
    }
  }

  std::set<std::uint32_t> out;
  for (const auto& f : ann) {
    if (normal_form(f, sat, g.order).is_zero()) continue;
    std::vector<std::uint32_t> cls;
    for (const auto& term : f.terms()) {
      std::uint32_t c = t.class_of(term.mono);
      if (c != FiniteQuotient::kFrontier) cls.push_back(c);
    }
    // keep the degrees of f minimal under divisibility after localizing
    for (std::size_t i = 0; i < cls.size(); ++i) {
      bool minimal = true;
      for (std::size_t j = 0; j < cls.size() && minimal; ++j) {
        if (i == j) continue;
        std::uint32_t below = pw.loc.to_local[cls[j]];
        std::uint32_t here = pw.loc.to_local[cls[i]];
        if (green_leq(pw.loc, below, here) && !green_leq(pw.loc, here, below)) minimal = false;
      }
      if (minimal && !t.is_nil[cls[i]] && is_witness[pw.loc.to_local[cls[i]]])
        out.insert(cls[i]);
    }
  }
  return {out.begin(), out.end()};
}

inline std::vector<Mesoprime> associated_mesoprimes(const GradedModule& g,
                                                    const FiniteQuotient& t,
                                                    const Budget& budget = Budget{}) {
  std::vector<Mesoprime> out;
  for (const auto& prime : enumerate_primes(t.nvars)) {
    std::vector<std::uint32_t> ess = essential_witnesses(g, t, prime, budget);
    if (ess.empty()) continue;
    LocalizedQuotient loc = localize(t, prime);
    for (auto w : ess) {
      Mesoprime mp = character_at(g, t, loc, loc.to_local[w], budget);
      if (std::find(out.begin(), out.end(), mp) == out.end()) out.push_back(mp);
    }
  }
  std::stable_sort(out.begin(), out.end(), mesoprime_less);
  return out;
}

struct MesoprimaryModuleReport {
  bool mesoprimary = false;
  bool properly_connected = true;
  std::vector<Mesoprime> mesoprimes;
};

// A module is mesoprimary when its degree congruence is and no nil degree
// carries a nonzero piece. With connected non-nil support and a fully
// explored table this must coincide with having exactly one mesoprime, so
// the two calculations check each other.
inline MesoprimaryModuleReport classify_mesoprimary_module(const GradedModule& g,
                                                           const FiniteQuotient& t,
                                                           const Budget& budget = Budget{}) {
  MesoprimaryModuleReport rep;
  rep.properly_connected = properly_connected(t);
  rep.mesoprimes = associated_mesoprimes(g, t, budget);

  GradingProbe probe = probe_grading(g, t, budget);
  bool nil_carries = false;
  bool degenerate = true;
  for (std::size_t c = 0; c < t.reps.size(); ++c) {
    if (t.is_nil[c] && probe.survivor[c].has_value()) nil_carries = true;
    if (!t.is_nil[c]) degenerate = false;
  }
  rep.mesoprimary = is_mesoprimary(t) && !nil_carries;

  if (!degenerate && rep.properly_connected && t.complete &&
      rep.mesoprimary != (rep.mesoprimes.size() == 1))
    throw InternalInconsistency("mesoprimary classification disagrees with the mesoprime count");
  return rep;
}

}  // namespace meso
