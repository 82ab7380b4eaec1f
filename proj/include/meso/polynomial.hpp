#pragma once

// Sparse vectors of polynomials with cyclotomic coefficients over a free
// module: each term is a coefficient on a module monomial x^u e_i. Term lists
// stay sorted descending under a fixed monomial order; the order is passed in
// wherever merging can happen.

#include <string>
#include <vector>

#include "meso/cyclotomic.hpp"
#include "meso/errors.hpp"
#include "meso/order.hpp"

namespace meso {

struct Term {
  Cyclo coeff;
  ModuleElement mono;
};

class PolyVector {
 public:
  PolyVector() = default;

  static PolyVector from_terms(std::vector<Term> ts, const MonomialOrder& ord) {
    PolyVector p;
    p.terms_ = std::move(ts);
    p.normalize(ord);
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  const Term& leading() const {
    if (terms_.empty()) throw InternalInconsistency("leading term of zero");
    return terms_.front();
  }

  PolyVector scaled(const Cyclo& c) const {
    if (c.is_zero()) return PolyVector{};
    PolyVector p = *this;
    for (auto& t : p.terms_) t.coeff = t.coeff * c;
    return p;
  }

  // The order is translation invariant, so shifting every monomial by the same
  // exponent keeps the list sorted.
  PolyVector times_monomial(const Exponent& shift) const {
    PolyVector p = *this;
    for (auto& t : p.terms_) t.mono.degree = t.mono.degree + shift;
    return p;
  }

  PolyVector monic() const {
    if (terms_.empty()) return *this;
    return scaled(terms_.front().coeff.inverse());
  }

  friend PolyVector add(const PolyVector& a, const PolyVector& b, const MonomialOrder& ord) {
    PolyVector r;
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (i == a.terms_.size()) {
        r.terms_.push_back(b.terms_[j++]);
      } else if (j == b.terms_.size()) {
        r.terms_.push_back(a.terms_[i++]);
      } else {
        int c = ord.cmp(a.terms_[i].mono, b.terms_[j].mono);
        if (c > 0) {
          r.terms_.push_back(a.terms_[i++]);
        } else if (c < 0) {
          r.terms_.push_back(b.terms_[j++]);
        } else {
          Cyclo s = a.terms_[i].coeff + b.terms_[j].coeff;
          if (!s.is_zero()) r.terms_.push_back(Term{s, a.terms_[i].mono});
          ++i;
          ++j;
        }
      }
    }
    return r;
  }

  friend PolyVector sub(const PolyVector& a, const PolyVector& b, const MonomialOrder& ord) {
    return add(a, b.scaled(Cyclo(-1)), ord);
  }

  friend bool operator==(const PolyVector& a, const PolyVector& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].coeff == b.terms_[i].coeff) || a.terms_[i].mono != b.terms_[i].mono)
        return false;
    return true;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) s += " + ";
      s += terms_[i].coeff.to_string() + "*" + meso::to_string(terms_[i].mono);
    }
    return s;
  }

 private:
  std::vector<Term> terms_;  // sorted descending, nonzero coefficients

  void normalize(const MonomialOrder& ord) {
    std::sort(terms_.begin(), terms_.end(),
              [&](const Term& a, const Term& b) { return ord.cmp(a.mono, b.mono) > 0; });
    std::vector<Term> merged;
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().mono == t.mono) {
        merged.back().coeff = merged.back().coeff + t.coeff;
      } else {
        merged.push_back(std::move(t));
      }
    }
    terms_.clear();
    for (auto& t : merged)
      if (!t.coeff.is_zero()) terms_.push_back(std::move(t));
  }
};

// True when every element has at most two terms (and, with exactly two, the
// sign pattern does not matter here; builders elsewhere rely on at-most-two).
inline bool is_binomial_family(const std::vector<PolyVector>& polys) {
  for (const auto& p : polys)
    if (p.terms().size() > 2) return false;
  return true;
}

}  // namespace meso
