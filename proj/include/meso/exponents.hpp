#pragma once

// Exponent vectors over N^n and Z^n, monoid primes of N^n, and localization
// contexts. A monoid prime of N^n is determined by a subset A of coordinates:
// its elements are the vectors with positive entry on some coordinate in A.
// Localizing at that prime inverts every coordinate outside A.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace meso {

using Exponent = std::vector<std::int64_t>;

inline Exponent operator+(const Exponent& a, const Exponent& b) {
  if (a.size() != b.size()) throw std::invalid_argument("exponent size mismatch");
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Exponent operator-(const Exponent& a, const Exponent& b) {
  if (a.size() != b.size()) throw std::invalid_argument("exponent size mismatch");
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline std::int64_t total_degree(const Exponent& a) {
  return std::accumulate(a.begin(), a.end(), std::int64_t{0});
}

inline bool is_nonnegative(const Exponent& a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t e) { return e >= 0; });
}

inline Exponent join(const Exponent& a, const Exponent& b) {  // componentwise max
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline Exponent meet(const Exponent& a, const Exponent& b) {  // componentwise min
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
  return r;
}

inline Exponent unit_exponent(std::size_t n, std::size_t k, std::int64_t c = 1) {
  Exponent r(n, 0);
  r[k] = c;
  return r;
}

inline std::string exponent_to_string(const Exponent& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

// An element of the free module ⊕_r N^n (or Z-shifted when localized):
// generator index plus degree.
struct ModuleElement {
  std::uint32_t gen = 0;
  Exponent degree;

  friend bool operator==(const ModuleElement&, const ModuleElement&) = default;
};

inline std::string to_string(const ModuleElement& m) {
  return exponent_to_string(m.degree) + "e" + std::to_string(m.gen + 1);
}

// Arbitrary strict order so module elements can key ordered containers.
inline bool module_element_less(const ModuleElement& a, const ModuleElement& b) {
  if (a.gen != b.gen) return a.gen < b.gen;
  return a.degree < b.degree;  // lexicographic on the underlying vectors
}

// A monoid prime of N^n: the sorted set A of coordinates generating it.
// The empty set is the prime {0}^c ... i.e. the prime ideal of nothing:
// localizing there inverts every coordinate.
struct MonoidPrime {
  std::vector<std::size_t> coords;  // sorted, unique

  MonoidPrime() = default;
  explicit MonoidPrime(std::vector<std::size_t> c) : coords(std::move(c)) {
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  }

  bool contains(std::size_t k) const {
    return std::binary_search(coords.begin(), coords.end(), k);
  }
  std::size_t size() const { return coords.size(); }

  friend bool operator==(const MonoidPrime&, const MonoidPrime&) = default;
};

// Order primes by (cardinality, lex); used everywhere a deterministic prime
// ordering is needed.
inline bool prime_less(const MonoidPrime& a, const MonoidPrime& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.coords < b.coords;
}

inline std::string to_string(const MonoidPrime& p) {
  std::string s = "{";
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p.coords[i] + 1);
  }
  return s + "}";
}

inline std::vector<MonoidPrime> enumerate_primes(std::size_t n) {
  if (n > 20) throw std::invalid_argument("enumerate_primes: too many coordinates");
  std::vector<MonoidPrime> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> c;
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (1u << k)) c.push_back(k);
    out.emplace_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), prime_less);
  return out;
}

// Tracks which coordinates are inverted when working in the localization at a
// prime: coordinates in the prime stay constrained to N, the rest become units.
struct LocalizationContext {
  std::size_t n = 0;
  MonoidPrime prime;

  LocalizationContext() = default;
  LocalizationContext(std::size_t n_, MonoidPrime p) : n(n_), prime(std::move(p)) {}

  bool inverted(std::size_t k) const { return !prime.contains(k); }

  std::vector<std::size_t> inverted_coords() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k)
      if (inverted(k)) out.push_back(k);
    return out;
  }
};

// Divisibility of monomials, optionally up to units of a localization:
// a | b iff b - a is nonnegative on every non-inverted coordinate.
inline bool divides(const Exponent& a, const Exponent& b, const LocalizationContext* ctx = nullptr) {
  if (a.size() != b.size()) throw std::invalid_argument("divides: size mismatch");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (ctx && ctx->inverted(k)) continue;
    if (b[k] < a[k]) return false;
  }
  return true;
}

inline bool divides(const ModuleElement& a, const ModuleElement& b,
                    const LocalizationContext* ctx = nullptr) {
  return a.gen == b.gen && divides(a.degree, b.degree, ctx);
}

}  // namespace meso
