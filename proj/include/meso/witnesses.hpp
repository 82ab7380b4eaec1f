#pragma once

// Witness theory on explored quotients: for each monoid prime the witnesses
// and key witnesses of the congruence, the associated primes, the prime
// congruence records they generate, and the primary / mesoprimary
// classification theorems built on top.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <vector>

#include "meso/errors.hpp"
#include "meso/quotient.hpp"

namespace meso {

struct PrimeWitnesses {
  MonoidPrime prime;
  LocalizedQuotient loc;
  std::vector<std::uint32_t> witnesses;      // local classes, ascending
  std::vector<std::uint32_t> key_witnesses;  // subset of the witnesses
};

namespace detail {

// all-pairs reachability in the local action digraph (units move both ways)
inline std::vector<std::vector<bool>> green_reachability(const LocalizedQuotient& loc) {
  const std::size_t m = loc.size();
  std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
  for (std::uint32_t s = 0; s < m; ++s) {
    std::deque<std::uint32_t> work{s};
    reach[s][s] = true;
    while (!work.empty()) {
      std::uint32_t c = work.front();
      work.pop_front();
      auto push = [&](std::uint32_t t) {
        if (t != FiniteQuotient::kFrontier && !reach[s][t]) {
          reach[s][t] = true;
          work.push_back(t);
        }
      };
      for (std::size_t k = 0; k < loc.act.size(); ++k) {
        push(loc.act[k][c]);
        if (!loc.act_inv[k].empty()) push(loc.act_inv[k][c]);
      }
    }
  }
  return reach;
}

// w is the unique maximal element of A exactly when everything else in A sits
// strictly below it
inline bool exclusively_maximal(std::uint32_t w, const std::vector<std::uint32_t>& A,
                                const std::vector<std::vector<bool>>& reach) {
  for (auto u : A)
    if (u != w && !(reach[u][w] && !reach[w][u])) return false;
  return true;
}

}  // namespace detail

inline PrimeWitnesses find_witnesses(const FiniteQuotient& q, const MonoidPrime& prime) {
  PrimeWitnesses pw;
  pw.prime = prime;
  pw.loc = localize(q, prime);
  const LocalizedQuotient& loc = pw.loc;
  const std::size_t m = loc.size();

  if (prime.coords.empty()) {
    // everything is a unit, so any class surviving the localization counts
    for (std::uint32_t c = 0; c < m; ++c)
      if (!loc.is_nil[c]) {
        pw.witnesses.push_back(c);
        pw.key_witnesses.push_back(c);
      }
    return pw;
  }

  auto reach = detail::green_reachability(loc);
  for (std::uint32_t c = 0; c < m; ++c) {
    if (loc.is_nil[c]) continue;
    bool defined = true, witness = true;
    for (auto p : prime.coords) {
      std::uint32_t target = loc.act[p][c];
      if (target == FiniteQuotient::kFrontier) {
        defined = false;
        break;
      }
      std::vector<std::uint32_t> kernel;
      for (std::uint32_t u = 0; u < m; ++u)
        if (loc.act[p][u] == target) kernel.push_back(u);
      if (kernel.size() < 2 || detail::exclusively_maximal(c, kernel, reach)) {
        witness = false;
        break;
      }
    }
    if (!defined) continue;
    if (witness) pw.witnesses.push_back(c);

    std::vector<std::uint32_t> joint;
    for (std::uint32_t u = 0; u < m; ++u) {
      bool same = true;
      for (auto p : prime.coords) {
        std::uint32_t tc = loc.act[p][c], tu = loc.act[p][u];
        if (tu == FiniteQuotient::kFrontier || tu != tc) {
          same = false;
          break;
        }
      }
      if (same) joint.push_back(u);
    }
    if (joint.size() >= 2 && !detail::exclusively_maximal(c, joint, reach))
      pw.key_witnesses.push_back(c);
  }
  return pw;
}

namespace detail {

inline bool has_nil_free_orbit(const FiniteQuotient& q) {
  for (std::uint32_t s = 0; s < q.reps.size(); ++s) {
    std::vector<bool> seen(q.reps.size(), false);
    std::deque<std::uint32_t> work{s};
    seen[s] = true;
    bool nil_free = true;
    while (!work.empty() && nil_free) {
      std::uint32_t c = work.front();
      work.pop_front();
      if (q.is_nil[c]) nil_free = false;
      for (std::size_t k = 0; k < q.nvars && nil_free; ++k) {
        std::uint32_t t = q.act[k][c];
        if (t == FiniteQuotient::kFrontier) nil_free = false;  // unknown, give up
        else if (!seen[t]) {
          seen[t] = true;
          work.push_back(t);
        }
      }
    }
    if (nil_free) return true;
  }
  return false;
}

}  // namespace detail

inline std::vector<MonoidPrime> associated_primes(const FiniteQuotient& q) {
  std::vector<MonoidPrime> out;
  for (const auto& p : enumerate_primes(q.nvars)) {
    PrimeWitnesses pw = find_witnesses(q, p);
    bool assoc = !pw.witnesses.empty();
    if (p.coords.empty() && q.complete && detail::has_nil_free_orbit(q) != assoc)
      throw InternalInconsistency(
          "empty prime witnesses disagree with the nil-free orbit criterion");
    if (assoc) out.push_back(p);
  }
  return out;  // enumerate_primes already sorts
}

// A prime congruence record (P, K): coordinates in P become one absorbing
// class, units are identified modulo the stabilizer lattice K.
struct PrimeCongruence {
  MonoidPrime prime;
  IntMat stabilizer;  // Hermite normal form rows over the inverted coordinates

  friend bool operator==(const PrimeCongruence&, const PrimeCongruence&) = default;
};

inline bool prime_congruence_less(const PrimeCongruence& a, const PrimeCongruence& b) {
  if (!(a.prime == b.prime)) return prime_less(a.prime, b.prime);
  if (a.stabilizer.size() != b.stabilizer.size())
    return a.stabilizer.size() < b.stabilizer.size();
  return a.stabilizer < b.stabilizer;
}

inline std::vector<PrimeCongruence> associated_prime_congruences(const FiniteQuotient& q) {
  std::vector<PrimeCongruence> out;
  for (const auto& p : enumerate_primes(q.nvars)) {
    PrimeWitnesses pw = find_witnesses(q, p);
    for (auto w : pw.key_witnesses)
      out.push_back({p, unit_stabilizer(pw.loc, w).lattice});
  }
  std::sort(out.begin(), out.end(), prime_congruence_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct PrimaryReport {
  bool primary = false;
  MonoidPrime prime;       // the nilpotent coordinates when primary
  bool degenerate = false; // no non-nil classes at all
};

inline PrimaryReport is_primary(const FiniteQuotient& q) {
  PrimaryReport r;
  bool any_non_nil = false;
  for (std::size_t c = 0; c < q.reps.size(); ++c)
    if (!q.is_nil[c]) any_non_nil = true;
  if (!any_non_nil) {
    r.primary = true;
    r.degenerate = true;
    std::vector<std::size_t> all(q.nvars);
    std::iota(all.begin(), all.end(), 0u);
    r.prime = MonoidPrime(all);
    return r;
  }

  std::vector<std::size_t> nilpotent_coords;
  bool primary = true;
  for (std::size_t k = 0; k < q.nvars; ++k) {
    bool cancellative = true;
    std::vector<bool> hit(q.reps.size(), false);
    for (std::size_t c = 0; c < q.reps.size(); ++c) {
      std::uint32_t t = q.act[k][c];
      if (t == FiniteQuotient::kFrontier) continue;
      if (hit[t]) cancellative = false;
      hit[t] = true;
    }
    bool nilpotent = true;
    for (std::size_t c = 0; c < q.reps.size() && nilpotent; ++c) {
      std::uint32_t t = static_cast<std::uint32_t>(c);
      for (std::size_t step = 0; step <= q.reps.size() && !q.is_nil[t]; ++step) {
        t = q.act[k][t];
        if (t == FiniteQuotient::kFrontier) break;
      }
      if (t == FiniteQuotient::kFrontier || !q.is_nil[t]) nilpotent = false;
    }
    if (nilpotent) nilpotent_coords.push_back(k);
    if (!cancellative && !nilpotent) primary = false;
  }
  r.primary = primary;
  if (primary) r.prime = MonoidPrime(nilpotent_coords);

  if (q.complete) {
    // cross check against the associated prime criterion
    auto assoc = associated_primes(q);
    if (primary && !(assoc.size() == 1 && assoc[0] == r.prime))
      throw InternalInconsistency("primary quotient without a unique matching associated prime");
    if (!primary && assoc.size() == 1)
      throw InternalInconsistency("unique associated prime on a non primary quotient");
  }
  return r;
}

// Mesoprimary exactly when primary with a single associated prime congruence.
inline bool is_mesoprimary(const FiniteQuotient& q) {
  PrimaryReport r = is_primary(q);
  if (!r.primary) return false;
  if (r.degenerate) return true;
  return associated_prime_congruences(q).size() == 1;
}

}  // namespace meso
