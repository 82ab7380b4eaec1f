#pragma once

// Characters on sublattices of Z^d with values in cyclotomic fields, and the
// extension of a character to the saturation of its lattice. An index-e
// sublattice admits exactly e extensions; finding them means extracting d-th
// roots, which may require enlarging the field.

#include <cstdint>
#include <numeric>
#include <vector>

#include "meso/cyclotomic.hpp"
#include "meso/errors.hpp"
#include "meso/lattice.hpp"

namespace meso {

// Q(zeta_m) = Q(zeta_{m/2}) for m = 2 mod 4, so orders are kept odd-or-div-4.
inline std::uint64_t normalize_cyclo_order(std::uint64_t m) {
  return (m % 4 == 2) ? m / 2 : m;
}

inline bool cyclo_field_contains(std::uint64_t m, std::uint64_t o) {
  m = normalize_cyclo_order(m);
  o = normalize_cyclo_order(o);
  return m % o == 0;
}

inline std::uint64_t cyclo_field_join(std::uint64_t a, std::uint64_t b) {
  return normalize_cyclo_order(std::lcm(normalize_cyclo_order(a), normalize_cyclo_order(b)));
}

// A multiplicative map from a lattice to the nonzero elements of a cyclotomic
// field, stored by its values on an HNF basis.
struct Character {
  std::size_t dim = 0;
  IntMat basis;               // HNF rows
  std::vector<Cyclo> values;  // values[i] = character at basis[i]

  Cyclo value_at(const IntVec& v) const {
    auto coords = lattice_coordinates(v, basis);
    if (!coords)
      throw InternalInconsistency("character evaluated outside its lattice");
    Cyclo r(Rational(1));
    for (std::size_t i = 0; i < basis.size(); ++i) r = r * values[i].pow(to_int64((*coords)[i]));
    return r;
  }

  bool operator==(const Character& o) const {
    return dim == o.dim && basis == o.basis && values == o.values;
  }
};

inline Character make_character(std::size_t dim, IntMat gens, std::vector<Cyclo> gen_values) {
  Character chi;
  chi.dim = dim;
  chi.basis = lattice_hnf(gens);
  chi.values.reserve(chi.basis.size());
  for (const auto& row : chi.basis) {
    // Express the HNF row in the original generators.
    auto coords = lattice_coordinates(row, gens);
    if (!coords) throw InternalInconsistency("HNF row not in generator lattice");
    Cyclo v(Rational(1));
    for (std::size_t i = 0; i < gens.size(); ++i) v = v * gen_values[i].pow(to_int64((*coords)[i]));
    chi.values.push_back(v);
  }
  // Consistency: the generator values must be reproduced.
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (!(chi.value_at(gens[i]) == gen_values[i]))
      throw InputError("character values are inconsistent on the generators");
  return chi;
}

// Smallest cyclotomic order whose field contains every value of chi.
inline std::uint64_t character_field_order(const Character& chi) {
  std::uint64_t m = 1;
  for (const auto& v : chi.values) m = cyclo_field_join(m, v.order());
  return m;
}

// All extensions of rho to the saturation of its lattice, with values in
// Q(zeta_{field_order}). Throws MissingRoot naming the smallest sufficient
// cyclotomic order when the requested field is too small, or with order 0 when
// no cyclotomic field contains the needed roots.
inline std::vector<Character> character_extensions(const Character& rho,
                                                  std::uint64_t field_order) {
  SaturationResult sat = saturate_lattice(rho.basis, rho.dim);
  if (rho.basis.empty()) {
    Character trivial;
    trivial.dim = rho.dim;
    return {trivial};
  }
  const std::size_t k = rho.basis.size();
  if (sat.basis.size() != k)
    throw InternalInconsistency("saturation changed the lattice rank");

  // rho.basis = E * sat.basis for an integer k x k matrix E.
  IntMat e(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto coords = lattice_coordinates(rho.basis[i], sat.basis);
    if (!coords) throw InternalInconsistency("lattice does not sit inside its saturation");
    e[i] = *coords;
  }
  SmithForm s = smith_normal_form(e);
  if (s.diagonal.size() != k)
    throw InternalInconsistency("inclusion matrix of full-rank sublattice is singular");

  // New aligned bases: c'_i = (V^{-1} sat.basis)_i and b'_i = (U rho.basis)_i
  // satisfy b'_i = d_i c'_i, so an extension sigma is fixed by d_i-th roots
  // sigma(c'_i) of rho(b'_i).
  IntMat cprime = mat_mul(s.vinv, sat.basis);
  std::vector<std::vector<Cyclo>> root_choices(k);
  std::uint64_t needed = normalize_cyclo_order(field_order);
  bool impossible = false;
  for (std::size_t i = 0; i < k; ++i) {
    Cyclo target(Rational(1));
    for (std::size_t j = 0; j < k; ++j) target = target * rho.values[j].pow(to_int64(s.u[i][j]));
    std::uint64_t di = s.diagonal[i].get_ui();
    try {
      root_choices[i] = all_roots(target, di);
    } catch (const MissingRoot&) {
      impossible = true;
      continue;
    }
    for (const auto& r : root_choices[i]) needed = cyclo_field_join(needed, r.order());
  }
  if (impossible) throw MissingRoot("no cyclotomic field contains the required roots", 0);
  if (!cyclo_field_contains(field_order, needed))
    throw MissingRoot("character extension needs a larger cyclotomic field", needed);

  // Cartesian product of the root choices.
  std::vector<Character> out;
  std::vector<std::size_t> pick(k, 0);
  while (true) {
    IntMat gens = cprime;
    std::vector<Cyclo> vals;
    for (std::size_t i = 0; i < k; ++i) vals.push_back(root_choices[i][pick[i]]);
    out.push_back(make_character(rho.dim, gens, vals));
    std::size_t pos = 0;
    while (pos < k) {
      if (++pick[pos] < root_choices[pos].size()) break;
      pick[pos] = 0;
      ++pos;
    }
    if (pos == k) break;
  }
  return out;
}

}  // namespace meso
