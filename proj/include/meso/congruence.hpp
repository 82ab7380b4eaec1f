#pragma once

// Finitely presented congruences on free monoid modules (N^n)^r and their
// completion into a confluent rewriting system. Generating pairs identify two
// module monomials; a nil generator declares a monomial absorbing, which is
// the same as identifying it with all of its translates.

#include <cstdint>
#include <deque>
#include <vector>

#include "meso/errors.hpp"
#include "meso/exponents.hpp"
#include "meso/order.hpp"

namespace meso {

struct CongruencePair {
  ModuleElement lhs;
  ModuleElement rhs;

  friend bool operator==(const CongruencePair&, const CongruencePair&) = default;
};

struct CongruencePresentation {
  std::size_t nvars = 0;
  std::size_t ngens = 1;
  std::vector<CongruencePair> pairs;
  std::vector<ModuleElement> nils;  // m ~ m + e_k for every coordinate k
};

// Knuth-Bendix completion. For commutative monoid congruences this is
// Buchberger's algorithm on pure differences: orient every equation by the
// monomial order, resolve overlaps of left hand sides (joins of exponents),
// and keep right hand sides reduced. Termination is guaranteed, the budget
// only guards against blowup.
class RewriteSystem {
 public:
  RewriteSystem() = default;

  RewriteSystem(const CongruencePresentation& pres, MonomialOrder ord, const Budget& budget)
      : nvars_(pres.nvars), ngens_(pres.ngens), ord_(std::move(ord)), nil_seeds_(pres.nils) {
    std::deque<CongruencePair> eqs(pres.pairs.begin(), pres.pairs.end());
    for (const auto& g : pres.nils)
      for (std::size_t k = 0; k < nvars_; ++k)
        eqs.push_back({g, ModuleElement{g.gen, g.degree + unit_exponent(nvars_, k)}});

    std::size_t processed = 0;
    while (!eqs.empty()) {
      if (++processed > budget.max_pairs)
        throw BudgetExceeded("congruence completion exceeded its pair budget");
      CongruencePair eq = eqs.front();
      eqs.pop_front();
      ModuleElement a = normal_form(eq.lhs);
      ModuleElement b = normal_form(eq.rhs);
      if (a == b) continue;
      if (ord_.less(a, b)) std::swap(a, b);
      CongruencePair rule{a, b};

      // rules the new one can reduce go back into the queue as equations
      std::vector<CongruencePair> kept;
      for (auto& r : rules_) {
        if (applies(rule, r.lhs)) eqs.push_back(r);
        else kept.push_back(std::move(r));
      }
      kept.push_back(rule);
      rules_ = std::move(kept);
      if (rules_.size() > budget.max_rules)
        throw BudgetExceeded("congruence completion exceeded its rule budget");
      for (auto& r : rules_) r.rhs = normal_form(r.rhs);

      for (const auto& r : rules_) {
        if (r.lhs.gen != rule.lhs.gen) continue;
        ModuleElement top{rule.lhs.gen, join(r.lhs.degree, rule.lhs.degree)};
        eqs.push_back({apply(r, top), apply(rule, top)});
      }
    }
  }

  ModuleElement normal_form(ModuleElement m) const {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& r : rules_) {
        if (applies(r, m)) {
          m = apply(r, m);
          changed = true;
          break;
        }
      }
    }
    return m;
  }

  const std::vector<CongruencePair>& rules() const { return rules_; }
  std::size_t nvars() const { return nvars_; }
  std::size_t ngens() const { return ngens_; }
  const MonomialOrder& order() const { return ord_; }
  // declared absorbing generators; a class is nil only if it contains one of
  // their cones, not merely because every coordinate happens to fix it
  const std::vector<ModuleElement>& nil_seeds() const { return nil_seeds_; }

 private:
  static bool applies(const CongruencePair& r, const ModuleElement& m) {
    return r.lhs.gen == m.gen && is_nonnegative(m.degree - r.lhs.degree);
  }
  static ModuleElement apply(const CongruencePair& r, const ModuleElement& m) {
    return ModuleElement{r.rhs.gen, m.degree - r.lhs.degree + r.rhs.degree};
  }

  std::size_t nvars_ = 0;
  std::size_t ngens_ = 1;
  MonomialOrder ord_;
  std::vector<CongruencePair> rules_;  // lhs > rhs, left hand sides irreducible
  std::vector<ModuleElement> nil_seeds_;
};

}  // namespace meso
