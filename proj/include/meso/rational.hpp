#pragma once

// Exact rational arithmetic. GMP's mpq does the heavy lifting; everything here
// keeps values canonical (gcd(num,den)=1, den>0) and provides the string forms
// used by serialization ("p" or "p/q").

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "meso/errors.hpp"

namespace meso {

using Int = mpz_class;
using Rational = mpq_class;

inline std::int64_t to_int64(const Int& v) {
  if (!v.fits_slong_p()) throw InputError("integer too large for a machine word: " + v.get_str());
  return v.get_si();
}

inline Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) throw InputError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return make_rational(Int(static_cast<long>(num)), Int(static_cast<long>(den)));
}

inline std::string rational_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
    if (!ok) throw InputError("bad rational literal: " + s);
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw InputError("bad rational literal: " + s);
  if (q.get_den() == 0) throw InputError("rational with zero denominator: " + s);
  q.canonicalize();
  return q;
}

inline Rational rational_pow(const Rational& q, std::int64_t e) {
  if (e == 0) return Rational(1);
  Rational base = q;
  std::int64_t n = e;
  if (n < 0) {
    if (base == 0) throw InputError("inverse of zero");
    base = Rational(1) / base;
    n = -n;
  }
  Rational out(1);
  while (n > 0) {
    if (n & 1) out *= base;
    base *= base;
    n >>= 1;
  }
  out.canonicalize();
  return out;
}

// Exact d-th root of a rational if it exists.
inline bool rational_root_exact(const Rational& q, unsigned long d, Rational* out) {
  if (d == 0) return false;
  if (q == 0) { *out = Rational(0); return true; }
  Int num = q.get_num(), den = q.get_den();
  bool neg = num < 0;
  if (neg) {
    if (d % 2 == 0) return false;
    num = -num;
  }
  Int rn, rd;
  int exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), d);
  int exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), d);
  if (!exact_n || !exact_d) return false;
  if (neg) rn = -rn;
  *out = make_rational(rn, rd);
  return true;
}

}  // namespace meso
