#pragma once

// Monomial orders on module monomials. The working order everywhere is
// position-over-term with graded reverse lexicographic on degrees; an optional
// elimination block (compared first by its total degree, then grevlex within
// the block) supports tag-variable eliminations.

#include <cstdint>
#include <vector>

#include "meso/exponents.hpp"

namespace meso {

// grevlex: higher total degree wins; on ties the vector whose last nonzero
// entry of a-b is negative is the larger one.
inline int grevlex_cmp(const Exponent& a, const Exponent& b) {
  std::int64_t da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    std::int64_t d = a[i] - b[i];
    if (d != 0) return d < 0 ? 1 : -1;
  }
  return 0;
}

inline int grevlex_cmp_coords(const Exponent& a, const Exponent& b,
                              const std::vector<std::size_t>& coords) {
  std::int64_t da = 0, db = 0;
  for (auto k : coords) { da += a[k]; db += b[k]; }
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = coords.size(); i-- > 0;) {
    std::int64_t d = a[coords[i]] - b[coords[i]];
    if (d != 0) return d < 0 ? 1 : -1;
  }
  return 0;
}

struct MonomialOrder {
  // Coordinates compared before anything else (for elimination); empty for the
  // plain order.
  std::vector<std::size_t> elim_block;

  // Returns <0, 0, >0 as a < b, a == b, a > b.
  int cmp(const ModuleElement& a, const ModuleElement& b) const {
    if (!elim_block.empty()) {
      int c = grevlex_cmp_coords(a.degree, b.degree, elim_block);
      if (c != 0) return c;
    }
    if (a.gen != b.gen) return a.gen < b.gen ? -1 : 1;
    return grevlex_cmp(a.degree, b.degree);
  }

  bool less(const ModuleElement& a, const ModuleElement& b) const { return cmp(a, b) < 0; }
};

}  // namespace meso
