#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "meso/congruence.hpp"
#include "meso/decomposition.hpp"
#include "meso/quotient.hpp"
#include "meso/witnesses.hpp"
#include "oracle_helpers.hpp"

using namespace meso;

namespace {

ModuleElement me(std::initializer_list<std::int64_t> exps, std::uint32_t gen = 0) {
  return ModuleElement{gen, Exponent(exps)};
}

FiniteQuotient build(const CongruencePresentation& pres, Budget b = Budget{}) {
  return explore_quotient(RewriteSystem(pres, MonomialOrder{}, b), b);
}

CongruencePresentation glued_square_pair() {
  CongruencePresentation pres;
  pres.nvars = 2;
  pres.ngens = 2;
  pres.nils = {me({2, 0}, 0), me({0, 2}, 0), me({2, 0}, 1), me({0, 2}, 1)};
  pres.pairs = {{me({1, 1}, 0), me({1, 1}, 1)}};
  return pres;
}

CongruencePresentation glued_axes() {
  CongruencePresentation pres;
  pres.nvars = 2;
  pres.ngens = 2;
  pres.pairs = {{me({0, 1}, 0), me({1, 1}, 0)},
                {me({0, 1}, 1), me({1, 1}, 1)},
                {me({0, 1}, 0), me({0, 1}, 1)}};
  pres.nils = {me({0, 2}, 0), me({0, 2}, 1)};
  return pres;
}

// the partition a component induces on a list of source classes, with
// outside classes reported as one shared symbol
std::vector<std::uint32_t> restrict_blocks(const CoprincipalComponent& comp,
                                           const std::vector<std::uint32_t>& classes) {
  std::vector<std::uint32_t> out;
  for (auto c : classes) out.push_back(comp.block[c]);
  return out;
}

}  // namespace

TEST_CASE("glued square pair splits into five mesoprimary components") {
  CongruencePresentation pres = glued_square_pair();
  FiniteQuotient q = build(pres);
  auto comps = mesoprimary_decomposition(q);
  REQUIRE(comps.size() == 5);
  for (const auto& c : comps) CHECK(c.prime == MonoidPrime({0, 1}));
  CHECK(decomposition_refines_exactly(q, comps));

  std::uint32_t a = q.class_of(me({0, 0}, 0)), b = q.class_of(me({1, 0}, 0));
  std::uint32_t cc = q.class_of(me({0, 1}, 0)), d = q.class_of(me({0, 0}, 1));
  std::uint32_t e = q.class_of(me({1, 0}, 1)), f = q.class_of(me({0, 1}, 1));
  std::uint32_t g = q.class_of(me({1, 1}, 0)), n = q.class_of(me({3, 3}, 0));

  // one component identifies the two copies entirely
  bool found_diagonal = false;
  for (const auto& comp : comps) {
    if (comp.block[g] == CoprincipalComponent::kOutside) continue;
    if (comp.block[a] != CoprincipalComponent::kOutside && comp.block[a] == comp.block[d]) {
      found_diagonal = true;
      CHECK(comp.block[b] == comp.block[e]);
      CHECK(comp.block[cc] == comp.block[f]);
      CHECK(comp.block[a] != comp.block[b]);
      CHECK(comp.block[g] != comp.block[a]);
      CHECK(comp.block[n] == CoprincipalComponent::kOutside);
    }
  }
  CHECK(found_diagonal);

  // one component isolates the two x classes only
  bool found_x = false;
  for (const auto& comp : comps)
    if (comp.block[b] != CoprincipalComponent::kOutside &&
        comp.block[a] != CoprincipalComponent::kOutside &&
        comp.block[cc] == CoprincipalComponent::kOutside &&
        comp.block[g] == CoprincipalComponent::kOutside)
      found_x = true;
  CHECK(found_x);

  // every component, rebuilt as a congruence, is a mesoprimary quotient
  for (const auto& comp : comps) {
    FiniteQuotient qc = build(component_presentation(pres, q, comp));
    CHECK(qc.complete);
    CHECK(is_mesoprimary(qc));
  }
}

TEST_CASE("period two chain decomposes into a corner and a cycle") {
  CongruencePresentation pres;
  pres.nvars = 1;
  pres.pairs = {{me({3}), me({1})}};
  FiniteQuotient q = build(pres);
  auto comps = mesoprimary_decomposition(q);
  REQUIRE(comps.size() == 2);
  CHECK(decomposition_refines_exactly(q, comps));

  std::uint32_t c0 = q.class_of(me({0}));
  std::uint32_t c1 = q.class_of(me({1}));
  std::uint32_t c2 = q.class_of(me({2}));

  // sorted by prime: the empty prime (cycle) component comes first
  CHECK(comps[0].prime == MonoidPrime{});
  CHECK(comps[0].block[c0] == comps[0].block[c2]);
  CHECK(comps[0].block[c1] != comps[0].block[c0]);
  CHECK(comps[0].block[c1] != CoprincipalComponent::kOutside);

  CHECK(comps[1].prime == MonoidPrime({0}));
  CHECK(comps[1].block[c0] != CoprincipalComponent::kOutside);
  CHECK(comps[1].block[c1] == CoprincipalComponent::kOutside);
  CHECK(comps[1].block[c2] == CoprincipalComponent::kOutside);

  for (const auto& comp : comps) {
    FiniteQuotient qc = build(component_presentation(pres, q, comp));
    CHECK(is_mesoprimary(qc));
  }
}

TEST_CASE("a mesoprimary congruence is its own decomposition") {
  CongruencePresentation pres;
  pres.nvars = 2;
  pres.nils = {me({2, 0}), me({0, 2})};
  FiniteQuotient q = build(pres);
  auto comps = mesoprimary_decomposition(q);
  REQUIRE(comps.size() == 1);
  CHECK(decomposition_refines_exactly(q, comps));
  // the single component separates all four explored classes
  std::vector<std::uint32_t> four = {q.class_of(me({0, 0})), q.class_of(me({1, 0})),
                                     q.class_of(me({0, 1})), q.class_of(me({1, 1}))};
  auto blocks = restrict_blocks(comps[0], four);
  CHECK(std::set<std::uint32_t>(blocks.begin(), blocks.end()).size() == 4);
  CHECK(comps[0].block[q.class_of(me({5, 5}))] == CoprincipalComponent::kOutside);
}

TEST_CASE("truncated glued axes decompose into three components") {
  CongruencePresentation pres = glued_axes();
  FiniteQuotient q = build(pres);
  auto comps = mesoprimary_decomposition(q);
  REQUIRE(comps.size() == 3);
  CHECK(decomposition_refines_exactly(q, comps));

  std::uint32_t a0 = q.class_of(me({0, 0}, 0)), a5 = q.class_of(me({5, 0}, 0));
  std::uint32_t b0 = q.class_of(me({0, 0}, 1));
  std::uint32_t yc = q.class_of(me({0, 1}, 0)), nil = q.class_of(me({0, 2}, 0));

  // the shared y class cogenerates a component merging both axes
  bool found_y = false;
  for (const auto& comp : comps) {
    if (comp.block[yc] == CoprincipalComponent::kOutside) continue;
    found_y = true;
    CHECK(comp.block[a0] == comp.block[b0]);
    CHECK(comp.block[a0] == comp.block[a5]);
    CHECK(comp.block[a0] != comp.block[yc]);
    CHECK(comp.block[nil] == CoprincipalComponent::kOutside);
  }
  CHECK(found_y);

  // one axis component keeps its seventeen explored powers apart
  bool found_axis = false;
  for (const auto& comp : comps) {
    if (comp.block[a0] == CoprincipalComponent::kOutside ||
        comp.block[yc] != CoprincipalComponent::kOutside)
      continue;
    found_axis = true;
    CHECK(comp.block[a0] != comp.block[a5]);
    CHECK(comp.block[b0] == CoprincipalComponent::kOutside);
  }
  CHECK(found_axis);

  for (const auto& comp : comps) {
    FiniteQuotient qc = build(component_presentation(pres, q, comp));
    CHECK(is_mesoprimary(qc));
  }
}

TEST_CASE("random congruences recombine exactly from their components") {
  std::mt19937 rng(37);
  std::uniform_int_distribution<int> coord(0, 3);
  std::uniform_int_distribution<int> style(0, 3);
  std::uniform_int_distribution<int> gens(1, 2);
  std::uniform_int_distribution<int> npairs(0, 2);

  for (int trial = 0; trial < 25; ++trial) {
    CongruencePresentation pres;
    pres.nvars = 2;
    pres.ngens = static_cast<std::size_t>(gens(rng));
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(pres.ngens - 1));
    for (std::uint32_t g = 0; g < pres.ngens; ++g) {
      pres.nils.push_back(me({0, 3}, g));
      switch (style(rng)) {
        case 0: pres.nils.push_back(me({3, 0}, g)); break;
        case 1: pres.pairs.push_back({me({2, 0}, g), me({0, 0}, g)}); break;
        case 2: pres.pairs.push_back({me({3, 0}, g), me({0, 0}, g)}); break;
        default: pres.pairs.push_back({me({4, 0}, g), me({2, 0}, g)}); break;
      }
    }
    int count = npairs(rng);
    for (int p = 0; p < count; ++p) {
      auto point = [&]() {
        for (;;) {
          Exponent e{coord(rng), coord(rng)};
          if (total_degree(e) <= 3) return e;
        }
      };
      pres.pairs.push_back({ModuleElement{pick(rng), point()}, ModuleElement{pick(rng), point()}});
    }

    FiniteQuotient q = build(pres);
    REQUIRE(q.complete);
    bool all_nil = std::all_of(q.is_nil.begin(), q.is_nil.end(), [](bool b) { return b; });
    auto comps = mesoprimary_decomposition(q);
    CHECK(comps.empty() == all_nil);
    CHECK(decomposition_refines_exactly(q, comps));
    for (const auto& comp : comps) {
      FiniteQuotient qc = build(component_presentation(pres, q, comp));
      if (qc.complete) CHECK(is_mesoprimary(qc));
    }
  }
}
