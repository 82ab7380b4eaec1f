#pragma once

// Integer lattice algorithms on arbitrary-precision matrices: Hermite normal
// form (canonical basis, membership, coordinates), Smith normal form with
// unimodular transforms, and saturation (L ⊗ Q) ∩ Z^d with its index.
// Vectors are rows throughout.

#include <cstdint>
#include <optional>
#include <vector>

#include "meso/errors.hpp"
#include "meso/rational.hpp"

namespace meso {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

inline IntMat identity_matrix(std::size_t n) {
  IntMat m(n, IntVec(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMat mat_mul(const IntMat& a, const IntMat& b) {
  if (a.empty() || b.empty()) return {};
  IntMat r(a.size(), IntVec(b[0].size(), Int(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

// Row-style Hermite normal form of the lattice spanned by the input rows:
// echelon rows with positive pivots, entries above each pivot reduced into
// [0, pivot). Zero rows dropped. Canonical, so equal lattices give equal HNFs.
inline IntMat lattice_hnf(IntMat rows) {
  if (rows.empty()) return {};
  const std::size_t d = rows[0].size();
  IntMat basis;
  std::size_t pivot_col = 0;
  std::vector<bool> used(rows.size(), false);
  while (pivot_col < d) {
    // Eliminate column pivot_col across all unused rows via gcd steps.
    while (true) {
      int best = -1;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (used[i] || rows[i][pivot_col] == 0) continue;
        if (best < 0 || abs(rows[i][pivot_col]) < abs(rows[best][pivot_col])) best = int(i);
      }
      if (best < 0) break;
      bool others = false;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (used[i] || int(i) == best || rows[i][pivot_col] == 0) continue;
        others = true;
        Int q = rows[i][pivot_col] / rows[best][pivot_col];  // truncated is fine
        for (std::size_t j = 0; j < d; ++j) rows[i][j] -= q * rows[best][j];
      }
      if (!others) {
        if (rows[best][pivot_col] < 0)
          for (std::size_t j = 0; j < d; ++j) rows[best][j] = -rows[best][j];
        used[best] = true;
        basis.push_back(rows[best]);
        break;
      }
    }
    ++pivot_col;
  }
  // Reduce entries above each pivot.
  for (std::size_t i = basis.size(); i-- > 0;) {
    std::size_t pc = 0;
    while (pc < d && basis[i][pc] == 0) ++pc;
    for (std::size_t k = 0; k < i; ++k) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), basis[k][pc].get_mpz_t(), basis[i][pc].get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < d; ++j) basis[k][j] -= q * basis[i][j];
    }
  }
  return basis;
}

// Membership test against an HNF basis.
inline bool in_lattice(IntVec v, const IntMat& hnf) {
  for (const auto& row : hnf) {
    std::size_t pc = 0;
    while (pc < row.size() && row[pc] == 0) ++pc;
    if (pc == row.size()) continue;
    if (v[pc] % row[pc] != 0) {
      if (v[pc] != 0) {
        // might still clear later pivots only if v[pc]==0; it's not
        return false;
      }
      continue;
    }
    Int q = v[pc] / row[pc];
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= q * row[j];
  }
  for (const auto& e : v)
    if (e != 0) return false;
  return true;
}

// Integer coordinates of v in terms of the given (independent) basis rows, if
// v lies in their lattice.
inline std::optional<IntVec> lattice_coordinates(const IntVec& v, const IntMat& basis) {
  if (basis.empty()) {
    for (const auto& e : v)
      if (e != 0) return std::nullopt;
    return IntVec{};
  }
  const std::size_t k = basis.size(), d = basis[0].size();
  // Solve x * basis = v over Q by Gaussian elimination on the transpose.
  std::vector<std::vector<Rational>> aug(d, std::vector<Rational>(k + 1, Rational(0)));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < k; ++i) aug[j][i] = Rational(basis[i][j]);
    aug[j][k] = Rational(v[j]);
  }
  std::size_t row = 0;
  std::vector<int> pivot_of_col(k, -1);
  for (std::size_t col = 0; col < k && row < d; ++col) {
    std::size_t sel = row;
    while (sel < d && aug[sel][col] == 0) ++sel;
    if (sel == d) continue;
    std::swap(aug[sel], aug[row]);
    Rational p = aug[row][col];
    for (auto& e : aug[row]) e /= p;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == row || aug[i][col] == 0) continue;
      Rational f = aug[i][col];
      for (std::size_t j = 0; j <= k; ++j) aug[i][j] -= f * aug[row][j];
    }
    pivot_of_col[col] = int(row);
    ++row;
  }
  IntVec coords(k, Int(0));
  for (std::size_t col = 0; col < k; ++col) {
    if (pivot_of_col[col] < 0) {
      // basis not independent; treat coordinate as zero and rely on the check
      continue;
    }
    Rational val = aug[std::size_t(pivot_of_col[col])][k];
    if (val.get_den() != 1) return std::nullopt;
    coords[col] = val.get_num();
  }
  // Verify (also catches inconsistent systems).
  IntVec check(d, Int(0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j) check[j] += coords[i] * basis[i][j];
  for (std::size_t j = 0; j < d; ++j)
    if (check[j] != v[j]) return std::nullopt;
  return coords;
}

struct SmithForm {
  IntMat d;     // U * A * V
  IntMat u, uinv;
  IntMat v, vinv;
  std::vector<Int> diagonal;  // nonzero invariant factors d_1 | d_2 | ...
};

// Smith normal form with all four transforms. Sizes here are tiny, so the
// plain gcd-reduction algorithm is plenty.
inline SmithForm smith_normal_form(IntMat a) {
  const std::size_t m = a.size(), n = m ? a[0].size() : 0;
  SmithForm s;
  s.u = identity_matrix(m);
  s.uinv = identity_matrix(m);
  s.v = identity_matrix(n);
  s.vinv = identity_matrix(n);

  auto row_swap = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(s.u[i], s.u[j]);
    for (std::size_t r = 0; r < m; ++r) std::swap(s.uinv[r][i], s.uinv[r][j]);
  };
  auto row_add = [&](std::size_t i, std::size_t j, const Int& c) {  // row_i += c*row_j
    for (std::size_t t = 0; t < n; ++t) a[i][t] += c * a[j][t];
    for (std::size_t t = 0; t < m; ++t) s.u[i][t] += c * s.u[j][t];
    for (std::size_t r = 0; r < m; ++r) s.uinv[r][j] -= c * s.uinv[r][i];
  };
  auto row_negate = [&](std::size_t i) {
    for (auto& e : a[i]) e = -e;
    for (auto& e : s.u[i]) e = -e;
    for (std::size_t r = 0; r < m; ++r) s.uinv[r][i] = -s.uinv[r][i];
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < m; ++r) std::swap(a[r][i], a[r][j]);
    for (std::size_t r = 0; r < n; ++r) std::swap(s.v[r][i], s.v[r][j]);
    std::swap(s.vinv[i], s.vinv[j]);
  };
  auto col_add = [&](std::size_t i, std::size_t j, const Int& c) {  // col_i += c*col_j
    for (std::size_t r = 0; r < m; ++r) a[r][i] += c * a[r][j];
    for (std::size_t r = 0; r < n; ++r) s.v[r][i] += c * s.v[r][j];
    for (std::size_t t = 0; t < n; ++t) s.vinv[j][t] -= c * s.vinv[i][t];
  };

  std::size_t t = 0;
  while (t < m && t < n) {
    // Find a nonzero entry in the remaining block.
    std::size_t pi = t, pj = t;
    bool found = false;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (!found || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i; pj = j; found = true;
        }
    if (!found) break;
    row_swap(t, pi);
    col_swap(t, pj);
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        Int q = a[i][t] / a[t][t];
        row_add(i, t, -q);
        if (a[i][t] != 0) { row_swap(t, i); dirty = true; }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        Int q = a[t][j] / a[t][t];
        col_add(j, t, -q);
        if (a[t][j] != 0) { col_swap(t, j); dirty = true; }
      }
    }
    // Pivot must divide the rest of the block.
    bool fixed = false;
    for (std::size_t i = t + 1; i < m && !fixed; ++i)
      for (std::size_t j = t + 1; j < n && !fixed; ++j)
        if (a[i][j] % a[t][t] != 0) {
          row_add(t, i, Int(1));
          fixed = true;
        }
    if (fixed) continue;
    if (a[t][t] < 0) row_negate(t);
    ++t;
  }
  s.d = a;
  for (std::size_t i = 0; i < t; ++i) s.diagonal.push_back(a[i][i]);
  return s;
}

struct SaturationResult {
  IntMat basis;  // HNF basis of the saturation
  Int index;     // [L^sat : L]
};

inline SaturationResult saturate_lattice(const IntMat& generators, std::size_t dim) {
  IntMat basis = lattice_hnf(generators);
  if (basis.empty()) return {IntMat{}, Int(1)};
  // SNF of the (rank x dim) basis matrix: basis = U^{-1} D V^{-1}; the
  // saturation is spanned by the first rank rows of V^{-1} scaled by 1.
  SmithForm s = smith_normal_form(basis);
  Int index(1);
  for (const auto& d : s.diagonal) index *= d;
  // basis rows span L = { z * basis } = { z U^{-1} D V^{-1} }. With rows as
  // vectors, L = row-span(D V^{-1}); saturation = row-span of the first rank
  // rows of V^{-1}.
  IntMat sat;
  for (std::size_t i = 0; i < s.diagonal.size(); ++i) sat.push_back(s.vinv[i]);
  (void)dim;
  return {lattice_hnf(sat), index};
}

}  // namespace meso
