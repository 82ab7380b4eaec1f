#pragma once

// Bridge between binomial submodules of a free module over the polynomial ring
// and congruences on the corresponding monoid module. A reduced binomial basis
// induces a congruence on the monomial degrees: two term elements glue their
// two degrees, one term elements declare an absorbing cone. The grading is
// "fine" when every congruence class carries at most a one dimensional piece;
// it is tight when in addition the nonzero pieces are exactly the non nil
// classes, distinct nil classes do not share a connected region of support,
// and the module action is nonzero whenever the congruence says it should be.
//
// tighten repairs a failed tightness check by re-presenting the surviving
// classes: each connected component under the corrected action (dead steps
// become absorbing) is rebuilt as a quotient of a free module with one
// generator per source class.

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "meso/congruence.hpp"
#include "meso/groebner.hpp"
#include "meso/polynomial.hpp"
#include "meso/quotient.hpp"

namespace meso {

struct GradedModule {
  std::size_t nvars = 1;
  std::size_t rank = 1;
  std::vector<PolyVector> defining;
  std::vector<PolyVector> basis;  // reduced basis of the defining submodule
  CongruencePresentation grading;
  MonomialOrder order{};
};

// Reads the congruence off a reduced binomial basis. Only the basis elements
// themselves contribute: a two term element glues the classes of its two
// monomials, a one term element starts a nil cone. No closure is taken here;
// common multiples merge later during exploration.
inline CongruencePresentation induced_congruence(const std::vector<PolyVector>& basis,
                                                 std::size_t nvars, std::size_t rank) {
  CongruencePresentation pres;
  pres.nvars = nvars;
  pres.ngens = rank;
  for (const auto& p : basis) {
    const auto& ts = p.terms();
    if (ts.size() == 1) {
      pres.nils.push_back(ts[0].mono);
    } else if (ts.size() == 2) {
      pres.pairs.push_back({ts[0].mono, ts[1].mono});
    } else if (!ts.empty()) {
      throw InputError("induced congruence needs a binomial basis");
    }
  }
  return pres;
}

inline GradedModule make_graded_module(std::size_t nvars, std::size_t rank,
                                       std::vector<PolyVector> defining,
                                       const Budget& budget = Budget{}) {
  if (!is_binomial_family(defining))
    throw InputError("defining generators must have at most two terms");
  GradedModule g;
  g.nvars = nvars;
  g.rank = rank;
  g.defining = std::move(defining);
  g.basis = buchberger(g.defining, g.order, budget);
  // s-polynomials and reductions of binomials stay binomial
  if (!is_binomial_family(g.basis))
    throw InternalInconsistency("binomial generators produced a non binomial basis");
  g.grading = induced_congruence(g.basis, nvars, rank);
  return g;
}

// Value of one monomial in its graded piece: the congruence class it lands in
// and the coefficient its normal form carries there. The basis rewriting and
// the congruence rewriting share one monomial order, so a nonzero normal form
// must sit exactly on the class representative.
struct PieceValue {
  std::uint32_t cls = 0;
  Cyclo coeff;
};

namespace detail {

inline PolyVector monomial_form(const GradedModule& g, const ModuleElement& m) {
  return normal_form(PolyVector::from_terms({Term{Cyclo(1), m}}, g.order), g.basis, g.order);
}

}  // namespace detail

inline PieceValue evaluate_monomial(const GradedModule& g, const FiniteQuotient& t,
                                    const ModuleElement& m) {
  std::uint32_t cls = t.class_of(m);
  if (cls == FiniteQuotient::kFrontier)
    throw BudgetExceeded("monomial lies beyond the explored quotient");
  PolyVector nf = detail::monomial_form(g, m);
  if (nf.is_zero()) return {cls, Cyclo(0)};
  if (nf.terms().size() != 1)
    throw InternalInconsistency("monomial reduced to a sum under a binomial basis");
  if (!(nf.terms()[0].mono == t.reps[cls]))
    throw InternalInconsistency("basis rewriting disagrees with the congruence normal form");
  return {cls, nf.terms()[0].coeff};
}

// Ratio m_a / m_b of two monomials whose classes merge in the localization:
// walk both classes up along the inverted coordinates until they coincide,
// then compare coefficients at the common translate.
inline Cyclo local_ratio(const GradedModule& g, const FiniteQuotient& t,
                         const LocalizedQuotient& loc, const ModuleElement& a,
                         const ModuleElement& b, const Budget& budget = Budget{}) {
  std::uint32_t ca = t.class_of(a), cb = t.class_of(b);
  if (ca == FiniteQuotient::kFrontier || cb == FiniteQuotient::kFrontier)
    throw BudgetExceeded("ratio endpoint lies beyond the explored quotient");
  if (loc.to_local[ca] != loc.to_local[cb])
    throw InputError("ratio of monomials from different localized classes");

  std::vector<std::size_t> up = loc.ctx.inverted_coords();
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::deque<std::tuple<std::uint32_t, std::uint32_t, Exponent>> work;
  work.emplace_back(ca, cb, Exponent(t.nvars, 0));
  seen.insert({ca, cb});
  std::size_t steps = 0;

  while (!work.empty()) {
    auto [u, v, s] = work.front();
    work.pop_front();
    if (u == v) {
      auto value_at = [&](const ModuleElement& m) {
        PolyVector nf = detail::monomial_form(g, ModuleElement{m.gen, m.degree + s});
        if (nf.is_zero())
          throw InternalInconsistency("ratio endpoint vanishes at the common translate");
        if (nf.terms().size() != 1 || !(nf.terms()[0].mono == t.reps[u]))
          throw InternalInconsistency("common translate missed its class representative");
        return nf.terms()[0].coeff;
      };
      return value_at(a) / value_at(b);
    }
    if (++steps > budget.max_pairs)
      throw BudgetExceeded("ratio search exceeded its pair budget");
    for (auto k : up) {
      std::uint32_t tu = t.act[k][u], tv = t.act[k][v];
      if (tu == FiniteQuotient::kFrontier || tv == FiniteQuotient::kFrontier) continue;
      if (seen.insert({tu, tv}).second)
        work.emplace_back(tu, tv, s + unit_exponent(t.nvars, k));
    }
  }
  throw BudgetExceeded("no common translate found within the explored region");
}

// Support data for tightness checks: one surviving monomial per class (a
// monomial with nonzero normal form, if any) and, per coordinate, whether the
// action kills that survivor. Throws if two monomials of one class survive
// with independent normal forms, since then the grading is not fine.
struct GradingProbe {
  std::vector<std::optional<ModuleElement>> survivor;
  std::vector<std::vector<bool>> dies;  // [coordinate][class]
};

inline GradingProbe probe_grading(const GradedModule& g, const FiniteQuotient& t,
                                  const Budget& budget = Budget{}) {
  GradingProbe probe;
  probe.survivor.assign(t.reps.size(), std::nullopt);
  probe.dies.assign(t.nvars, std::vector<bool>(t.reps.size(), false));
  std::vector<std::optional<ModuleElement>> image(t.reps.size());

  auto visit = [&](const ModuleElement& m) {
    std::uint32_t cls = t.class_of(m);
    if (cls == FiniteQuotient::kFrontier) return;
    PolyVector nf = detail::monomial_form(g, m);
    if (nf.is_zero()) return;
    if (nf.terms().size() != 1)
      throw InternalInconsistency("monomial reduced to a sum under a binomial basis");
    const ModuleElement& mono = nf.terms()[0].mono;
    if (!image[cls]) {
      image[cls] = mono;
      probe.survivor[cls] = m;
      for (std::size_t k = 0; k < t.nvars; ++k) {
        ModuleElement next{m.gen, m.degree + unit_exponent(t.nvars, k)};
        probe.dies[k][cls] = detail::monomial_form(g, next).is_zero();
      }
    } else if (!(*image[cls] == mono)) {
      throw InputError("grading is not fine: one degree carries two independent monomials");
    }
  };

  Exponent exps(t.nvars, 0);
  std::function<void(std::uint32_t, std::size_t, std::int64_t)> walk =
      [&](std::uint32_t gen, std::size_t k, std::int64_t left) {
        if (k == t.nvars) {
          visit(ModuleElement{gen, exps});
          return;
        }
        for (std::int64_t e = 0; e <= left; ++e) {
          exps[k] = e;
          walk(gen, k + 1, left - e);
        }
        exps[k] = 0;
      };
  for (std::uint32_t gen = 0; gen < t.ngens; ++gen)
    walk(gen, 0, static_cast<std::int64_t>(budget.degree));
  return probe;
}

enum class TightViolation {
  support_mismatch,  // a non nil class with zero piece, or a nil class with support
  shared_nil,        // the region around one nil splits into several orbits
  dead_action,       // a step the congruence keeps alive kills the module element
};

struct TightReport {
  struct Entry {
    TightViolation kind = TightViolation::support_mismatch;
    std::uint32_t cls = 0;
    std::size_t coord = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };
  bool tight = true;
  std::vector<Entry> violations;
};

inline TightReport is_tight(const GradedModule&, const FiniteQuotient& t,
                            const GradingProbe& probe) {
  TightReport rep;
  const std::size_t n = t.reps.size();

  for (std::uint32_t c = 0; c < n; ++c)
    if (t.is_nil[c] == probe.survivor[c].has_value())
      rep.violations.push_back({TightViolation::support_mismatch, c, 0});

  // union-find over the whole action graph, and a second one restricted to
  // edges between non nil classes; a nil class is healthy when the non nil
  // part of its ordinary component forms at most one restricted orbit
  std::vector<std::uint32_t> all(n), live(n);
  std::iota(all.begin(), all.end(), 0u);
  std::iota(live.begin(), live.end(), 0u);
  auto find = [](std::vector<std::uint32_t>& p, std::uint32_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  };
  for (std::uint32_t c = 0; c < n; ++c)
    for (std::size_t k = 0; k < t.nvars; ++k) {
      std::uint32_t tc = t.act[k][c];
      if (tc == FiniteQuotient::kFrontier) continue;
      all[find(all, c)] = find(all, tc);
      if (!t.is_nil[c] && !t.is_nil[tc]) live[find(live, c)] = find(live, tc);
    }
  for (std::uint32_t z = 0; z < n; ++z) {
    if (!t.is_nil[z]) continue;
    std::set<std::uint32_t> orbits;
    for (std::uint32_t c = 0; c < n; ++c)
      if (!t.is_nil[c] && find(all, c) == find(all, z)) orbits.insert(find(live, c));
    if (orbits.size() > 1)
      rep.violations.push_back({TightViolation::shared_nil, z, 0});
  }

  for (std::uint32_t c = 0; c < n; ++c) {
    if (!probe.survivor[c]) continue;
    for (std::size_t k = 0; k < t.nvars; ++k) {
      std::uint32_t tc = t.act[k][c];
      if (probe.dies[k][c] && tc != FiniteQuotient::kFrontier && probe.survivor[tc])
        rep.violations.push_back({TightViolation::dead_action, c, k});
    }
  }

  rep.tight = rep.violations.empty();
  return rep;
}

// Tight re-presentation of the surviving classes. Components are taken under
// the corrected action where killed steps become absorbing; each component is
// generated by its source classes (plus a smallest-class fallback inside
// cycles) and presented by a breadth first walk: repeat arrivals at a class
// become glued pairs, killed steps become nil generators, frontier arrivals
// mark the component as truncated.
struct TightenResult {
  CongruencePresentation grading;
  std::vector<std::uint32_t> seed;      // per generator: the class it names
  std::vector<std::size_t> component;   // per generator
  std::vector<bool> complete;           // per component
  std::vector<bool> structurally_free;  // per component: truncated, no relations found
};

inline TightenResult tighten(const GradedModule&, const FiniteQuotient& t,
                             const GradingProbe& probe) {
  const std::size_t n = t.reps.size();
  constexpr std::uint32_t kDead = FiniteQuotient::kFrontier - 1;

  auto step = [&](std::uint32_t c, std::size_t k) -> std::uint32_t {
    if (probe.dies[k][c]) return kDead;
    std::uint32_t tc = t.act[k][c];
    if (tc == FiniteQuotient::kFrontier || !probe.survivor[tc]) return FiniteQuotient::kFrontier;
    return tc;
  };
  auto surviving = [&](std::uint32_t c) { return probe.survivor[c].has_value(); };

  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> has_pred(n, false);
  for (std::uint32_t c = 0; c < n; ++c) {
    if (!surviving(c)) continue;
    for (std::size_t k = 0; k < t.nvars; ++k) {
      std::uint32_t tc = step(c, k);
      if (tc >= kDead) continue;
      parent[find(c)] = find(tc);
      has_pred[tc] = true;
    }
  }

  TightenResult out;
  out.grading.nvars = t.nvars;

  // component ids in order of their smallest class, generators per component
  std::vector<std::size_t> comp_id(n, n);
  std::vector<std::vector<std::uint32_t>> members;
  for (std::uint32_t c = 0; c < n; ++c) {
    if (!surviving(c)) continue;
    std::uint32_t r = find(c);
    if (comp_id[r] == n) {
      comp_id[r] = members.size();
      members.emplace_back();
    }
    members[comp_id[r]].push_back(c);
  }

  for (std::size_t ci = 0; ci < members.size(); ++ci) {
    std::vector<bool> covered(n, false);
    auto cover = [&](std::uint32_t s) {
      std::deque<std::uint32_t> bfs{s};
      covered[s] = true;
      while (!bfs.empty()) {
        std::uint32_t c = bfs.front();
        bfs.pop_front();
        for (std::size_t k = 0; k < t.nvars; ++k) {
          std::uint32_t tc = step(c, k);
          if (tc < kDead && !covered[tc]) {
            covered[tc] = true;
            bfs.push_back(tc);
          }
        }
      }
    };
    for (std::uint32_t c : members[ci])
      if (!has_pred[c] && !covered[c]) {
        out.seed.push_back(c);
        out.component.push_back(ci);
        cover(c);
      }
    for (std::uint32_t c : members[ci])
      if (!covered[c]) {  // every source sits in a cycle, pick the smallest
        out.seed.push_back(c);
        out.component.push_back(ci);
        cover(c);
      }
  }
  out.grading.ngens = out.seed.size();
  out.complete.assign(members.size(), true);
  std::vector<bool> has_relation(members.size(), false);

  // one joint walk; components are disjoint so they do not interact
  struct Arrival {
    std::uint32_t gen;
    Exponent degree;
  };
  std::vector<std::optional<Arrival>> rep(n);
  std::deque<std::uint32_t> work;
  for (std::uint32_t gi = 0; gi < out.seed.size(); ++gi) {
    rep[out.seed[gi]] = Arrival{gi, Exponent(t.nvars, 0)};
    work.push_back(out.seed[gi]);
  }
  while (!work.empty()) {
    std::uint32_t c = work.front();
    work.pop_front();
    std::size_t ci = comp_id[find(c)];
    for (std::size_t k = 0; k < t.nvars; ++k) {
      ModuleElement arriving{rep[c]->gen, rep[c]->degree + unit_exponent(t.nvars, k)};
      std::uint32_t tc = step(c, k);
      if (tc == FiniteQuotient::kFrontier) {
        out.complete[ci] = false;
      } else if (tc == kDead) {
        bool redundant = false;
        for (const auto& nil : out.grading.nils)
          if (divides(nil, arriving)) redundant = true;
        if (!redundant) {
          out.grading.nils.push_back(arriving);
          has_relation[ci] = true;
        }
      } else if (!rep[tc]) {
        rep[tc] = Arrival{arriving.gen, arriving.degree};
        work.push_back(tc);
      } else {
        ModuleElement at{rep[tc]->gen, rep[tc]->degree};
        CongruencePair glue{at, arriving};
        if (!(at == arriving) &&
            std::find(out.grading.pairs.begin(), out.grading.pairs.end(), glue) ==
                out.grading.pairs.end()) {
          out.grading.pairs.push_back(glue);
          has_relation[ci] = true;
        }
      }
    }
  }

  out.structurally_free.assign(members.size(), false);
  for (std::size_t ci = 0; ci < members.size(); ++ci)
    out.structurally_free[ci] = !out.complete[ci] && !has_relation[ci];
  return out;
}

}  // namespace meso
