#pragma once

// Elements of cyclotomic fields Q(zeta_m), represented as vectors of rational
// coefficients in the power basis 1, zeta, ..., zeta^{phi(m)-1} modulo the
// m-th cyclotomic polynomial. Order 1 is plain Q. Mixed-order arithmetic
// promotes both operands into Q(zeta_lcm); results that happen to be rational
// demote back to order 1 so rationals always have a unique representation.

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "meso/errors.hpp"
#include "meso/rational.hpp"

namespace meso {

namespace detail {

inline std::uint64_t euler_phi(std::uint64_t m) {
  std::uint64_t result = m, p = 2, mm = m;
  while (p * p <= mm) {
    if (mm % p == 0) {
      while (mm % p == 0) mm /= p;
      result -= result / p;
    }
    ++p;
  }
  if (mm > 1) result -= result / mm;
  return result;
}

// Dense integer polynomials, index = power. Used only to build cyclotomic
// polynomials; field arithmetic proper works over Q.
using ZPoly = std::vector<Int>;

inline void zpoly_trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division by a monic divisor.
inline ZPoly zpoly_div_monic(ZPoly num, const ZPoly& den) {
  ZPoly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Int(0));
  while (num.size() >= den.size() && !num.empty()) {
    Int c = num.back();
    std::size_t shift = num.size() - den.size();
    q[shift] = c;
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
    zpoly_trim(num);
  }
  if (!num.empty()) throw InternalInconsistency("cyclotomic polynomial division not exact");
  return q;
}

inline const ZPoly& cyclotomic_polynomial(std::uint64_t m) {
  static std::map<std::uint64_t, ZPoly> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  if (m == 0) throw InputError("cyclotomic order must be positive");
  ZPoly xm_minus_1(m + 1, Int(0));
  xm_minus_1[0] = -1;
  xm_minus_1[m] = 1;
  ZPoly acc = xm_minus_1;
  for (std::uint64_t d = 1; d < m; ++d)
    if (m % d == 0) acc = zpoly_div_monic(std::move(acc), cyclotomic_polynomial(d));
  return cache.emplace(m, std::move(acc)).first->second;
}

using QPoly = std::vector<Rational>;

inline void qpoly_trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder modulo the (monic, integer) m-th cyclotomic polynomial.
inline QPoly qpoly_mod_cyclo(QPoly p, std::uint64_t m) {
  const ZPoly& phi = cyclotomic_polynomial(m);
  qpoly_trim(p);
  while (p.size() >= phi.size()) {
    Rational c = p.back();
    std::size_t shift = p.size() - phi.size();
    for (std::size_t i = 0; i < phi.size(); ++i) p[shift + i] -= c * Rational(phi[i]);
    qpoly_trim(p);
  }
  return p;
}

inline QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  qpoly_trim(r);
  return r;
}

}  // namespace detail

class Cyclo {
 public:
  Cyclo() : order_(1), coeffs_(1, Rational(0)) {}
  /*implicit*/ Cyclo(const Rational& q) : order_(1), coeffs_(1, q) {}
  /*implicit*/ Cyclo(std::int64_t v) : order_(1), coeffs_(1, make_rational(v)) {}

  static Cyclo from_coeffs(std::uint64_t order, std::vector<Rational> coeffs) {
    if (order == 0) throw InputError("cyclotomic order must be positive");
    std::uint64_t deg = detail::euler_phi(order);
    if (coeffs.size() > deg) throw InputError("coefficient vector longer than phi(order)");
    coeffs.resize(deg, Rational(0));
    Cyclo c;
    c.order_ = order;
    c.coeffs_ = std::move(coeffs);
    c.normalize();
    return c;
  }

  static Cyclo zeta(std::uint64_t m, std::uint64_t k = 1) {
    if (m == 0) throw InputError("cyclotomic order must be positive");
    k %= m;
    detail::QPoly p(k + 1, Rational(0));
    p[k] = 1;
    p = detail::qpoly_mod_cyclo(std::move(p), m);
    p.resize(detail::euler_phi(m), Rational(0));
    return from_coeffs(m, std::move(p));
  }

  std::uint64_t order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != 0) return false;
    return true;
  }
  bool is_rational() const { return order_ == 1; }
  Rational rational_value() const {
    if (order_ != 1) throw InternalInconsistency("rational_value on non-rational element");
    return coeffs_[0];
  }

  // Image under Q(zeta_m) -> Q(zeta_M), zeta_m -> zeta_M^{M/m}; requires m | M.
  Cyclo promoted(std::uint64_t M) const {
    if (M == order_) return *this;
    if (M % order_ != 0) throw InternalInconsistency("cyclotomic promotion needs divisibility");
    std::uint64_t step = M / order_;
    detail::QPoly p;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      std::size_t pos = i * step;
      if (p.size() <= pos) p.resize(pos + 1, Rational(0));
      p[pos] += coeffs_[i];
    }
    p = detail::qpoly_mod_cyclo(std::move(p), M);
    p.resize(detail::euler_phi(M), Rational(0));
    // Deliberately skip normalization: callers align coefficient vectors, so
    // the result must really use the order-M basis even when the value is
    // rational.
    Cyclo r;
    r.order_ = M;
    r.coeffs_ = std::move(p);
    return r;
  }

  friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
    auto [x, y, M] = aligned(a, b);
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
    x.normalize();
    return x;
  }
  friend Cyclo operator-(const Cyclo& a, const Cyclo& b) {
    auto [x, y, M] = aligned(a, b);
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] -= y.coeffs_[i];
    x.normalize();
    return x;
  }
  Cyclo operator-() const {
    Cyclo r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
    auto [x, y, M] = aligned(a, b);
    detail::QPoly p = detail::qpoly_mul(x.coeffs_poly(), y.coeffs_poly());
    p = detail::qpoly_mod_cyclo(std::move(p), M);
    p.resize(detail::euler_phi(M), Rational(0));
    return from_coeffs(M, std::move(p));
  }

  Cyclo inverse() const {
    if (is_zero()) throw InputError("inverse of zero field element");
    if (order_ == 1) return Cyclo(Rational(1) / coeffs_[0]);
    // Extended Euclid in Q[x] against the cyclotomic polynomial.
    detail::QPoly r0, r1 = coeffs_poly();
    for (const auto& c : detail::cyclotomic_polynomial(order_)) r0.push_back(Rational(c));
    detail::QPoly s0{}, s1{Rational(1)};
    while (true) {
      detail::qpoly_trim(r1);
      if (r1.empty()) throw InternalInconsistency("cyclotomic inverse: gcd hit zero");
      if (r1.size() == 1) {
        Rational lead = r1[0];
        detail::QPoly out = s1;
        for (auto& c : out) c /= lead;
        out = detail::qpoly_mod_cyclo(std::move(out), order_);
        out.resize(detail::euler_phi(order_), Rational(0));
        return from_coeffs(order_, std::move(out));
      }
      // r0 = q*r1 + rem
      detail::QPoly rem = r0, q(rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 0,
                                Rational(0));
      while (rem.size() >= r1.size() && !rem.empty()) {
        Rational c = rem.back() / r1.back();
        std::size_t shift = rem.size() - r1.size();
        q[shift] = c;
        for (std::size_t i = 0; i < r1.size(); ++i) rem[shift + i] -= c * r1[i];
        detail::qpoly_trim(rem);
      }
      detail::QPoly s2 = s0;  // s2 = s0 - q*s1
      detail::QPoly qs1 = detail::qpoly_mul(q, s1);
      if (s2.size() < qs1.size()) s2.resize(qs1.size(), Rational(0));
      for (std::size_t i = 0; i < qs1.size(); ++i) s2[i] -= qs1[i];
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
  }

  friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }

  Cyclo pow(std::int64_t e) const {
    if (e == 0) return Cyclo(1);
    Cyclo base = e < 0 ? inverse() : *this;
    std::uint64_t n = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    Cyclo out(1);
    while (n > 0) {
      if (n & 1) out = out * base;
      base = base * base;
      n >>= 1;
    }
    return out;
  }

  friend bool operator==(const Cyclo& a, const Cyclo& b) {
    auto [x, y, M] = aligned(a, b);
    return x.coeffs_ == y.coeffs_;
  }
  friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

  // Multiplicative order if this is a root of unity, else 0. Roots of unity in
  // Q(zeta_m) all have order dividing lcm(2,m).
  std::uint64_t unity_order() const {
    if (is_zero()) return 0;
    std::uint64_t M = std::lcm<std::uint64_t>(2, order_);
    Cyclo p = *this;
    for (std::uint64_t k = 1; k <= M; ++k) {
      if (p == Cyclo(1)) return k;  // first period = multiplicative order
      p = p * *this;
    }
    return 0;
  }

  std::string to_string() const {
    if (order_ == 1) return rational_to_string(coeffs_[0]);
    std::string s = "[m=" + std::to_string(order_) + ";";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) s += ",";
      s += rational_to_string(coeffs_[i]);
    }
    return s + "]";
  }

 private:
  std::uint64_t order_;
  std::vector<Rational> coeffs_;

  detail::QPoly coeffs_poly() const {
    detail::QPoly p = coeffs_;
    detail::qpoly_trim(p);
    return p;
  }

  void normalize() {
    if (order_ == 1) return;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) return;
    Rational c = coeffs_[0];
    order_ = 1;
    coeffs_.assign(1, c);
  }

  static std::tuple<Cyclo, Cyclo, std::uint64_t> aligned(const Cyclo& a, const Cyclo& b) {
    std::uint64_t M = std::lcm(a.order_, b.order_);
    return {a.promoted(M), b.promoted(M), M};
  }
};

inline Cyclo zeta(std::uint64_t m, std::uint64_t k = 1) { return Cyclo::zeta(m, k); }

// All solutions y of y^d = c in the smallest cyclotomic field containing them,
// or MissingRoot. Handles c = (root of unity) * (rational with an exact d-th
// root); anything else has no cyclotomic root at all (irrational radical).
inline std::vector<Cyclo> all_roots(const Cyclo& c, std::uint64_t d) {
  if (d == 0) throw InputError("0th root");
  if (c.is_zero()) return {Cyclo(0)};
  std::uint64_t uo = c.unity_order();
  Rational radical(1);
  std::uint64_t unity_part_order = 1;
  std::uint64_t unity_power = 0;  // c = radical * zeta_{unity_part_order}^{unity_power}
  if (uo != 0) {
    unity_part_order = uo;
    bool found = false;
    for (std::uint64_t k = 0; k < uo && !found; ++k)
      if (c == zeta(uo, k)) {
        unity_power = k;
        found = true;
      }
    if (!found) throw InternalInconsistency("unity_order inconsistent with zeta scan");
  } else if (c.is_rational()) {
    Rational q = c.rational_value();
    radical = q < 0 ? -q : q;
    if (q < 0) { unity_part_order = 2; unity_power = 1; }
  } else {
    // Try c = q * (root of unity) with q rational: scan units of the field.
    std::uint64_t M = std::lcm<std::uint64_t>(2, c.order());
    bool found = false;
    for (std::uint64_t k = 0; k < M && !found; ++k) {
      Cyclo ratio = c / zeta(M, k);
      if (ratio.is_rational()) {
        Rational q = ratio.rational_value();
        radical = q < 0 ? -q : q;
        unity_part_order = M;
        unity_power = q < 0 ? (k + M / 2) % M : k;
        if (unity_part_order == 2 && unity_power == 0) unity_part_order = 1;
        found = true;
      }
    }
    if (!found)
      throw MissingRoot("no cyclotomic field contains a " + std::to_string(d) +
                            "-th root of " + c.to_string(),
                        0);
  }
  Rational root;
  if (!rational_root_exact(radical, d, &root))
    throw MissingRoot("no cyclotomic field contains a " + std::to_string(d) +
                          "-th root of " + c.to_string() + " (irrational radical)",
                      0);
  // y = root * zeta_{d*unity_part_order}^{unity_power} * zeta_d^j, j = 0..d-1.
  std::uint64_t big = d * unity_part_order;
  Cyclo base = Cyclo(root) * zeta(big, unity_power);
  std::vector<Cyclo> out;
  for (std::uint64_t j = 0; j < d; ++j) out.push_back(base * zeta(d, j));
  return out;
}

// Smallest cyclotomic order m such that Q(zeta_m) contains a d-th root of c
// (for the shapes all_roots handles); 0 if none exists.
inline std::uint64_t root_field_order(const Cyclo& c, std::uint64_t d) {
  try {
    auto roots = all_roots(c, d);
    std::uint64_t m = 1;
    for (const auto& r : roots) m = std::lcm(m, r.order());
    return m;
  } catch (const MissingRoot&) {
    return 0;
  }
}

}  // namespace meso
