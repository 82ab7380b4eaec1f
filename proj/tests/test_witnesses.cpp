#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "meso/congruence.hpp"
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

bool is_witness(const PrimeWitnesses& pw, std::uint32_t local) {
  return std::binary_search(pw.witnesses.begin(), pw.witnesses.end(), local);
}
bool is_key(const PrimeWitnesses& pw, std::uint32_t local) {
  return std::binary_search(pw.key_witnesses.begin(), pw.key_witnesses.end(), local);
}

}  // namespace

TEST_CASE("glued square pair is mesoprimary with five key witnesses") {
  FiniteQuotient q = build(glued_square_pair());

  PrimeWitnesses pw = find_witnesses(q, MonoidPrime({0, 1}));
  CHECK(pw.witnesses.size() == 5);
  CHECK(pw.key_witnesses == pw.witnesses);
  auto local = [&](const ModuleElement& m) { return pw.loc.to_local[q.class_of(m)]; };
  CHECK(is_key(pw, local(me({1, 0}, 0))));
  CHECK(is_key(pw, local(me({0, 1}, 0))));
  CHECK(is_key(pw, local(me({1, 0}, 1))));
  CHECK(is_key(pw, local(me({0, 1}, 1))));
  CHECK(is_key(pw, local(me({1, 1}, 0))));
  CHECK_FALSE(is_witness(pw, local(me({0, 0}, 0))));
  CHECK_FALSE(is_witness(pw, local(me({0, 0}, 1))));

  for (MonoidPrime p : {MonoidPrime({0}), MonoidPrime({1}), MonoidPrime{}}) {
    PrimeWitnesses none = find_witnesses(q, p);
    CHECK(none.witnesses.empty());
    CHECK(none.key_witnesses.empty());
  }

  CHECK(associated_primes(q) == std::vector<MonoidPrime>{MonoidPrime({0, 1})});
  auto apc = associated_prime_congruences(q);
  REQUIRE(apc.size() == 1);
  CHECK(apc[0].prime == MonoidPrime({0, 1}));
  CHECK(apc[0].stabilizer.empty());

  PrimaryReport pr = is_primary(q);
  CHECK(pr.primary);
  CHECK(pr.prime == MonoidPrime({0, 1}));
  CHECK_FALSE(pr.degenerate);
  CHECK(is_mesoprimary(q));
  CHECK(oracle::mesoprimary_by_definition(q, 5));
}

TEST_CASE("period two chain has a monoid witness and an empty prime") {
  CongruencePresentation pres;
  pres.nvars = 1;
  pres.pairs = {{me({3}), me({1})}};
  FiniteQuotient q = build(pres);

  PrimeWitnesses max = find_witnesses(q, MonoidPrime({0}));
  REQUIRE(max.witnesses.size() == 1);
  CHECK(max.key_witnesses == max.witnesses);
  CHECK(is_key(max, max.loc.to_local[q.class_of(me({0}))]));
  // the top of the chain is exclusively maximal in its kernel class
  CHECK_FALSE(is_witness(max, max.loc.to_local[q.class_of(me({2}))]));

  PrimeWitnesses empty = find_witnesses(q, MonoidPrime{});
  CHECK(empty.witnesses.size() == 2);  // both period classes survive
  CHECK(empty.key_witnesses == empty.witnesses);

  CHECK(associated_primes(q) ==
        std::vector<MonoidPrime>{MonoidPrime{}, MonoidPrime({0})});
  auto apc = associated_prime_congruences(q);
  REQUIRE(apc.size() == 2);
  CHECK(apc[0].prime == MonoidPrime{});
  CHECK(apc[0].stabilizer == IntMat{{2}});
  CHECK(apc[1].prime == MonoidPrime({0}));
  CHECK(apc[1].stabilizer.empty());

  CHECK_FALSE(is_primary(q).primary);
  CHECK_FALSE(is_mesoprimary(q));
  CHECK_FALSE(oracle::primary_by_definition(q));
}

TEST_CASE("single square with absorbing boundary is mesoprimary at the corner") {
  CongruencePresentation pres;
  pres.nvars = 2;
  pres.nils = {me({2, 0}), me({0, 2})};
  FiniteQuotient q = build(pres);

  PrimeWitnesses pw = find_witnesses(q, MonoidPrime({0, 1}));
  REQUIRE(pw.key_witnesses.size() == 1);
  CHECK(is_key(pw, pw.loc.to_local[q.class_of(me({1, 1}))]));
  CHECK(pw.witnesses == pw.key_witnesses);

  CHECK(associated_primes(q) == std::vector<MonoidPrime>{MonoidPrime({0, 1})});
  CHECK(is_mesoprimary(q));
  CHECK(oracle::mesoprimary_by_definition(q, 5));
}

TEST_CASE("one dimensional absorbing chain") {
  CongruencePresentation pres;
  pres.nvars = 1;
  pres.nils = {me({2})};
  FiniteQuotient q = build(pres);

  CHECK(associated_primes(q) == std::vector<MonoidPrime>{MonoidPrime({0})});
  PrimeWitnesses pw = find_witnesses(q, MonoidPrime({0}));
  REQUIRE(pw.key_witnesses.size() == 1);
  CHECK(is_key(pw, pw.loc.to_local[q.class_of(me({1}))]));
  CHECK(is_mesoprimary(q));
  CHECK(oracle::mesoprimary_by_definition(q, 6));
}

TEST_CASE("glued axes split into two prime congruences at one prime") {
  FiniteQuotient q = build(glued_axes());

  PrimeWitnesses pw = find_witnesses(q, MonoidPrime({1}));
  CHECK(pw.witnesses.size() == 35);  // both axes entirely, plus the shared y class
  CHECK(pw.key_witnesses == pw.witnesses);
  auto local = [&](const ModuleElement& m) { return pw.loc.to_local[q.class_of(m)]; };
  CHECK(is_key(pw, local(me({0, 1}, 0))));
  CHECK(is_key(pw, local(me({0, 0}, 0))));
  CHECK(is_key(pw, local(me({7, 0}, 1))));

  CHECK(find_witnesses(q, MonoidPrime({0, 1})).witnesses.empty());
  CHECK(associated_primes(q) == std::vector<MonoidPrime>{MonoidPrime({1})});

  auto apc = associated_prime_congruences(q);
  REQUIRE(apc.size() == 2);
  CHECK(apc[0].prime == MonoidPrime({1}));
  CHECK(apc[0].stabilizer.empty());
  CHECK(apc[1].prime == MonoidPrime({1}));
  CHECK(apc[1].stabilizer == IntMat{{1}});

  PrimaryReport pr = is_primary(q);
  CHECK(pr.primary);
  CHECK(pr.prime == MonoidPrime({1}));
  CHECK_FALSE(is_mesoprimary(q));
}

TEST_CASE("two chains glued at their nils stay mesoprimary") {
  CongruencePresentation two;
  two.nvars = 1;
  two.ngens = 2;
  two.nils = {me({2}, 0), me({2}, 1)};
  two.pairs = {{me({2}, 0), me({2}, 1)}};
  FiniteQuotient q = build(two);

  PrimeWitnesses pw = find_witnesses(q, MonoidPrime({0}));
  CHECK(pw.key_witnesses.size() == 2);
  CHECK(is_key(pw, pw.loc.to_local[q.class_of(me({1}, 0))]));
  CHECK(is_key(pw, pw.loc.to_local[q.class_of(me({1}, 1))]));

  auto apc = associated_prime_congruences(q);
  REQUIRE(apc.size() == 1);
  CHECK(is_mesoprimary(q));
  CHECK(oracle::mesoprimary_by_definition(q, 6));
  CHECK_FALSE(properly_connected(q));
}

TEST_CASE("all nil quotient classifies without witnesses") {
  CongruencePresentation pres;
  pres.nvars = 1;
  pres.nils = {me({0})};
  FiniteQuotient q = build(pres);
  REQUIRE(q.reps.size() == 1);
  CHECK(q.is_nil[0]);

  CHECK(associated_primes(q).empty());
  PrimaryReport pr = is_primary(q);
  CHECK(pr.primary);
  CHECK(pr.degenerate);
  CHECK(is_mesoprimary(q));
}

TEST_CASE("random classification agrees with the definitions") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> coord(0, 3);
  std::uniform_int_distribution<int> style(0, 3);
  std::uniform_int_distribution<int> npairs(0, 2);

  int primary_seen = 0, meso_seen = 0, neither_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    CongruencePresentation pres;
    pres.nvars = 2;
    pres.nils.push_back(me({0, 3}));
    // the x direction is absorbing, periodic from the start, or eventually
    // periodic, so all three classification outcomes show up
    switch (style(rng)) {
      case 0: pres.nils.push_back(me({3, 0})); break;
      case 1: pres.pairs.push_back({me({2, 0}), me({0, 0})}); break;
      case 2: pres.pairs.push_back({me({3, 0}), me({0, 0})}); break;
      default: pres.pairs.push_back({me({4, 0}), me({2, 0})}); break;
    }
    int count = npairs(rng);
    for (int p = 0; p < count; ++p) {
      auto point = [&]() {
        for (;;) {
          Exponent e{coord(rng), coord(rng)};
          if (total_degree(e) <= 3) return e;
        }
      };
      pres.pairs.push_back({ModuleElement{0, point()}, ModuleElement{0, point()}});
    }

    FiniteQuotient q = build(pres);
    REQUIRE(q.complete);
    bool primary = is_primary(q).primary;
    bool meso = is_mesoprimary(q);
    CHECK(primary == oracle::primary_by_definition(q));
    CHECK(meso == oracle::mesoprimary_by_definition(q, 6));
    neither_seen += !primary;
    primary_seen += primary && !meso;
    meso_seen += meso;
  }
  // the sample must exercise every outcome
  CHECK(primary_seen > 0);
  CHECK(meso_seen > 0);
  CHECK(neither_seen > 0);
}

TEST_CASE("a translate identified generator classifies as a unit cycle") {
  CongruencePresentation pres;
  pres.nvars = 1;
  pres.pairs = {{me({1}), me({0})}};
  FiniteQuotient q = build(pres);

  auto assoc = associated_primes(q);
  REQUIRE(assoc.size() == 1);
  CHECK(assoc[0] == MonoidPrime{});

  PrimeWitnesses at_empty = find_witnesses(q, MonoidPrime{});
  CHECK(at_empty.witnesses == std::vector<std::uint32_t>{0});
  CHECK(at_empty.key_witnesses == std::vector<std::uint32_t>{0});
  CHECK(find_witnesses(q, MonoidPrime({0})).witnesses.empty());

  auto apc = associated_prime_congruences(q);
  REQUIRE(apc.size() == 1);
  CHECK(apc[0].prime == MonoidPrime{});
  CHECK(apc[0].stabilizer == IntMat{{1}});

  PrimaryReport rep = is_primary(q);
  CHECK(rep.primary);
  CHECK_FALSE(rep.degenerate);
  CHECK(rep.prime == MonoidPrime{});
  CHECK(is_mesoprimary(q));
}
