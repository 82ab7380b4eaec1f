#pragma once

// Buchberger's algorithm for submodules of free modules over a polynomial ring
// with cyclotomic coefficients, plus the usual derived operations: membership,
// intersection, colon by a monomial, and saturation by a set of variables.
// Output bases are reduced, monic and sorted, hence canonical: equal
// submodules produce identical bases.
//
// No product criterion: leading terms on different module positions simply
// never form a pair.

#include <deque>
#include <vector>

#include "meso/errors.hpp"
#include "meso/polynomial.hpp"

namespace meso {

inline PolyVector normal_form(PolyVector p, const std::vector<PolyVector>& basis,
                              const MonomialOrder& ord) {
  std::size_t i = 0;
  while (i < p.terms().size()) {
    const Term& t = p.terms()[i];
    const PolyVector* red = nullptr;
    for (const auto& g : basis) {
      if (g.is_zero()) continue;
      if (divides(g.leading().mono, t.mono)) {
        red = &g;
        break;
      }
    }
    if (!red) {
      ++i;
      continue;
    }
    Cyclo f = t.coeff / red->leading().coeff;
    Exponent shift = t.mono.degree - red->leading().mono.degree;
    p = sub(p, red->scaled(f).times_monomial(shift), ord);
    // terms above position i are untouched; the term at i was cancelled
  }
  return p;
}

inline PolyVector s_polynomial(const PolyVector& f, const PolyVector& g,
                               const MonomialOrder& ord) {
  const Term& lf = f.leading();
  const Term& lg = g.leading();
  if (lf.mono.gen != lg.mono.gen)
    throw InternalInconsistency("s-polynomial across module positions");
  Exponent u = join(lf.mono.degree, lg.mono.degree);
  PolyVector a = f.scaled(lf.coeff.inverse()).times_monomial(u - lf.mono.degree);
  PolyVector b = g.scaled(lg.coeff.inverse()).times_monomial(u - lg.mono.degree);
  return sub(a, b, ord);
}

inline std::vector<PolyVector> buchberger(const std::vector<PolyVector>& gens,
                                          const MonomialOrder& ord, const Budget& budget) {
  std::vector<PolyVector> basis;
  for (const auto& g : gens)
    if (!g.is_zero()) basis.push_back(g);

  std::deque<std::pair<std::size_t, std::size_t>> pairs;
  auto queue_pairs_for = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i)
      if (basis[i].leading().mono.gen == basis[j].leading().mono.gen) pairs.emplace_back(i, j);
  };
  for (std::size_t j = 0; j < basis.size(); ++j) queue_pairs_for(j);

  std::size_t processed = 0;
  while (!pairs.empty()) {
    auto [i, j] = pairs.front();
    pairs.pop_front();
    if (++processed > budget.max_pairs)
      throw BudgetExceeded("basis computation exceeded the pair budget");
    PolyVector r = normal_form(s_polynomial(basis[i], basis[j], ord), basis, ord);
    if (r.is_zero()) continue;
    basis.push_back(std::move(r));
    if (basis.size() > budget.max_rules)
      throw BudgetExceeded("basis computation exceeded the size budget");
    queue_pairs_for(basis.size() - 1);
  }

  // Interreduce to the unique reduced basis.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      PolyVector self = std::move(basis[i]);
      basis[i] = PolyVector{};
      PolyVector r = normal_form(self, basis, ord);
      basis[i] = std::move(self);
      if (!(r == basis[i])) {
        basis[i] = std::move(r);
        changed = true;
      }
    }
    basis.erase(std::remove_if(basis.begin(), basis.end(),
                               [](const PolyVector& p) { return p.is_zero(); }),
                basis.end());
  }
  for (auto& g : basis) g = g.monic();
  std::sort(basis.begin(), basis.end(), [&](const PolyVector& a, const PolyVector& b) {
    return ord.cmp(a.leading().mono, b.leading().mono) < 0;
  });
  return basis;
}

inline bool member(const PolyVector& p, const std::vector<PolyVector>& gb,
                   const MonomialOrder& ord) {
  return normal_form(p, gb, ord).is_zero();
}

inline bool equal_submodules(const std::vector<PolyVector>& a, const std::vector<PolyVector>& b,
                             const MonomialOrder& ord, const Budget& budget = Budget{}) {
  return buchberger(a, ord, budget) == buchberger(b, ord, budget);
}

namespace detail {

inline PolyVector extend_vars(const PolyVector& p, const MonomialOrder& ord) {
  std::vector<Term> ts;
  for (const auto& t : p.terms()) {
    Term nt = t;
    nt.mono.degree.push_back(0);
    ts.push_back(std::move(nt));
  }
  return PolyVector::from_terms(std::move(ts), ord);
}

inline PolyVector drop_last_var(const PolyVector& p, const MonomialOrder& ord) {
  std::vector<Term> ts;
  for (const auto& t : p.terms()) {
    Term nt = t;
    nt.mono.degree.pop_back();
    ts.push_back(std::move(nt));
  }
  return PolyVector::from_terms(std::move(ts), ord);
}

inline bool tag_free(const PolyVector& p, std::size_t tag) {
  for (const auto& t : p.terms())
    if (t.mono.degree[tag] != 0) return false;
  return true;
}

}  // namespace detail

// N1 meet N2 via the tag construction: eliminate t from t*N1 + (1-t)*N2.
inline std::vector<PolyVector> intersect_submodules(const std::vector<PolyVector>& n1,
                                                    const std::vector<PolyVector>& n2,
                                                    std::size_t nvars, const Budget& budget) {
  MonomialOrder plain{};
  MonomialOrder elim{{nvars}};
  Exponent tag = unit_exponent(nvars + 1, nvars);
  std::vector<PolyVector> work;
  for (const auto& f : n1) work.push_back(detail::extend_vars(f, elim).times_monomial(tag));
  for (const auto& g : n2) {
    PolyVector ge = detail::extend_vars(g, elim);
    work.push_back(sub(ge, ge.times_monomial(tag), elim));
  }
  std::vector<PolyVector> out;
  for (const auto& h : buchberger(work, elim, budget))
    if (detail::tag_free(h, nvars)) out.push_back(detail::drop_last_var(h, plain));
  return buchberger(out, plain, budget);
}

// (N : x^m) for a plain monomial x^m: intersect with x^m * F, then divide.
inline std::vector<PolyVector> colon_by_monomial(const std::vector<PolyVector>& n,
                                                 const Exponent& m, std::size_t nvars,
                                                 std::size_t ngens, const Budget& budget) {
  MonomialOrder plain{};
  std::vector<PolyVector> mf;
  for (std::uint32_t i = 0; i < ngens; ++i)
    mf.push_back(PolyVector::from_terms({Term{Cyclo(1), ModuleElement{i, m}}}, plain));
  std::vector<PolyVector> out;
  for (const auto& h : intersect_submodules(n, mf, nvars, budget)) {
    // every term of an element of x^m F is divisible by x^m
    Exponent neg(m.size(), 0);
    out.push_back(h.times_monomial(neg - m));
  }
  return buchberger(out, plain, budget);
}

// N : (prod of the given variables)^infinity via a tag: eliminate t from
// N + <(t * prod - 1) e_i>.
inline std::vector<PolyVector> saturate_by_vars(const std::vector<PolyVector>& n,
                                                const std::vector<std::size_t>& vars,
                                                std::size_t nvars, std::size_t ngens,
                                                const Budget& budget) {
  MonomialOrder plain{};
  if (vars.empty()) return buchberger(n, plain, budget);
  MonomialOrder elim{{nvars}};
  Exponent tp = unit_exponent(nvars + 1, nvars);
  for (auto k : vars) tp[k] += 1;
  std::vector<PolyVector> work;
  for (const auto& f : n) work.push_back(detail::extend_vars(f, elim));
  for (std::uint32_t i = 0; i < ngens; ++i) {
    Exponent zero(nvars + 1, 0);
    work.push_back(PolyVector::from_terms(
        {Term{Cyclo(1), ModuleElement{i, tp}}, Term{Cyclo(-1), ModuleElement{i, zero}}}, elim));
  }
  std::vector<PolyVector> out;
  for (const auto& h : buchberger(work, elim, budget))
    if (detail::tag_free(h, nvars)) out.push_back(detail::drop_last_var(h, plain));
  return buchberger(out, plain, budget);
}

// Pulling a submodule back along localization at a monoid prime amounts to
// saturating by the inverted variables.
inline std::vector<PolyVector> localization_preimage(const std::vector<PolyVector>& n,
                                                     const LocalizationContext& ctx,
                                                     std::size_t ngens, const Budget& budget) {
  return saturate_by_vars(n, ctx.inverted_coords(), ctx.n, ngens, budget);
}

}  // namespace meso
