#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "meso/io.hpp"

using namespace meso;

namespace {

ModuleElement me(std::vector<std::int64_t> exps, std::uint32_t gen = 0) {
  ModuleElement m;
  m.gen = gen;
  m.degree = std::move(exps);
  return m;
}

Term trm(std::int64_t c, std::vector<std::int64_t> exps, std::uint32_t gen = 0) {
  return Term{Cyclo(c), me(std::move(exps), gen)};
}

PolyVector pv(std::vector<Term> terms) {
  return PolyVector::from_terms(std::move(terms), MonomialOrder{});
}

bool mentions(const InputError& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("json parse errors carry a line and column") {
  REQUIRE(parse_json("{\"a\": 1}").at("a") == 1);

  try {
    parse_json("{\n  \"a\": 1,\n  bad\n}");
    FAIL("expected a parse failure");
  } catch (const InputError& e) {
    CHECK(mentions(e, "malformed JSON"));
    CHECK(mentions(e, "line 3"));
  }

  try {
    parse_json("");
    FAIL("expected a parse failure");
  } catch (const InputError& e) {
    CHECK(mentions(e, "line 1"));
  }
}

TEST_CASE("cyclotomic values round trip through json") {
  std::vector<Cyclo> samples = {
      Cyclo(0), Cyclo(7), Cyclo(Rational(-3, 7)),
      zeta(3), zeta(3, 2) * Cyclo(2) + Cyclo(Rational(1, 2)), zeta(4) * Cyclo(-1)};
  for (const auto& c : samples) {
    CHECK(cyclo_from_json(cyclo_to_json(c)) == c);
  }

  CHECK(cyclo_from_json(Json(5)) == Cyclo(5));
  CHECK(cyclo_from_json(Json(-2)) == Cyclo(-2));
  CHECK(cyclo_from_json(Json("2/3")) == Cyclo(Rational(2, 3)));
  CHECK(cyclo_from_json(Json("-4")) == Cyclo(-4));

  Json bad;
  bad["order"] = 3;
  REQUIRE_THROWS_AS(cyclo_from_json(bad), InputError);
  REQUIRE_THROWS_AS(cyclo_from_json(Json(1.5)), InputError);
}

TEST_CASE("module elements validate their shape") {
  ModuleElement m = me({2, 0, 1}, 1);
  CHECK(element_from_json(element_to_json(m), 3, 2) == m);

  Json j = element_to_json(m);
  REQUIRE_THROWS_AS(element_from_json(j, 3, 1), InputError);  // gen out of range
  REQUIRE_THROWS_AS(element_from_json(j, 2, 2), InputError);  // wrong exponent count

  Json neg = element_to_json(me({1, -1, 0}, 0));
  try {
    element_from_json(neg, 3, 2);
    FAIL("expected rejection of a negative exponent");
  } catch (const InputError& e) {
    CHECK(mentions(e, "nonnegative"));
  }

  REQUIRE_THROWS_AS(element_from_json(Json::array(), 3, 2), InputError);
}

TEST_CASE("module vectors round trip and respect the term bound") {
  MonomialOrder ord{};
  PolyVector p = pv({trm(1, {2, 0}, 0), trm(-3, {0, 1}, 1)});
  CHECK(poly_from_json(poly_to_json(p), 2, 2, ord) == p);

  PolyVector zeta_poly = pv({Term{zeta(3), me({1, 0}, 0)}, Term{Cyclo(-1), me({0, 0}, 0)}});
  CHECK(poly_from_json(poly_to_json(zeta_poly), 2, 1, ord) == zeta_poly);

  PolyVector three = pv({trm(1, {2, 0}), trm(1, {1, 1}), trm(1, {0, 2})});
  CHECK(poly_from_json(poly_to_json(three), 2, 1, ord) == three);
  try {
    poly_from_json(poly_to_json(three), 2, 1, ord, 2);
    FAIL("expected the two term bound to reject a trinomial");
  } catch (const InputError& e) {
    CHECK(mentions(e, "at most 2"));
  }

  REQUIRE_THROWS_AS(poly_from_json(Json::object(), 2, 1, ord), InputError);
}

TEST_CASE("primes and lattices round trip") {
  MonoidPrime p({0, 2});
  CHECK(prime_from_json(prime_to_json(p), 3) == p);
  REQUIRE_THROWS_AS(prime_from_json(Json::array({3}), 3), InputError);
  REQUIRE_THROWS_AS(prime_from_json(Json::object(), 3), InputError);

  IntMat lat = {{Int(1), Int(-2)}, {Int(0), Int(3)}};
  CHECK(lattice_from_json(lattice_to_json(lat)) == lat);

  IntMat big = {{Int("123456789012345678901234567890")}};
  CHECK(lattice_from_json(lattice_to_json(big)) == big);

  Json bad = Json::array({Json::array({true})});
  REQUIRE_THROWS_AS(lattice_from_json(bad), InputError);
}

TEST_CASE("mesoprimes round trip and compare by content") {
  Mesoprime mp;
  mp.prime = MonoidPrime({1});
  mp.lattice = {{Int(2)}};
  mp.values = {Cyclo(-1)};
  mp.witness = 7;  // provenance only, not part of identity

  Mesoprime back = mesoprime_from_json(mesoprime_to_json(mp), 2);
  CHECK(back == mp);
  CHECK(back.witness == 0);

  Json j = mesoprime_to_json(mp);
  j["values"] = Json::array();
  REQUIRE_THROWS_AS(mesoprime_from_json(j, 2), InputError);
  REQUIRE_THROWS_AS(mesoprime_from_json(Json::array(), 2), InputError);
}

TEST_CASE("binomial problems parse, validate, and emit canonically") {
  std::string text = R"({
    "ring": {"vars": ["x", "y"], "coeff": "QQ"},
    "module": {"rank": 2, "defining": [
      [{"coeff": 1, "exponents": [2, 0], "gen": 0}],
      [{"coeff": 1, "exponents": [0, 2], "gen": 0}]
    ]},
    "target": {"kind": "binomial", "generators": [
      [{"coeff": 1, "exponents": [1, 1], "gen": 0},
       {"coeff": -1, "exponents": [1, 1], "gen": 1}]
    ]},
    "options": {"budget": 8, "verify": true, "prune": false, "format": "json"}
  })";

  ProblemFile p = problem_from_json(parse_json(text));
  CHECK(p.vars == std::vector<std::string>{"x", "y"});
  CHECK(p.nvars() == 2);
  CHECK(p.field_order == 1);
  CHECK(p.rank == 2);
  CHECK(p.defining.size() == 2);
  CHECK(p.binomial_target);
  REQUIRE(p.generators.size() == 1);
  CHECK(p.generators[0] == pv({trm(1, {1, 1}, 0), trm(-1, {1, 1}, 1)}));
  CHECK(p.budget == 8);
  CHECK(p.budget_specified);
  CHECK(p.verify);
  CHECK_FALSE(p.prune);

  // emit is canonical: reparse then emit reproduces the same bytes
  Json emitted = problem_to_json(p);
  Json again = problem_to_json(problem_from_json(emitted));
  CHECK(emitted.dump(2) == again.dump(2));
  CHECK(problem_from_json(emitted).generators == p.generators);
}

TEST_CASE("congruence problems parse pairs and nils") {
  std::string text = R"({
    "ring": {"vars": ["x", "y"]},
    "module": {"rank": 2},
    "target": {"kind": "congruence", "generators": [
      {"pair": [{"exponents": [1, 1], "gen": 0}, {"exponents": [1, 1], "gen": 1}]},
      {"nil": {"exponents": [2, 0], "gen": 0}},
      {"nil": {"exponents": [0, 2], "gen": 0}}
    ]}
  })";

  ProblemFile p = problem_from_json(parse_json(text));
  CHECK_FALSE(p.binomial_target);
  CHECK(p.congruence.nvars == 2);
  CHECK(p.congruence.ngens == 2);
  REQUIRE(p.congruence.pairs.size() == 1);
  CHECK(p.congruence.pairs[0].lhs == me({1, 1}, 0));
  CHECK(p.congruence.pairs[0].rhs == me({1, 1}, 1));
  REQUIRE(p.congruence.nils.size() == 2);
  CHECK(p.congruence.nils[0] == me({2, 0}, 0));

  // defaults when options are absent
  CHECK(p.budget == 16);
  CHECK_FALSE(p.budget_specified);
  CHECK(p.verify);
  CHECK_FALSE(p.prune);
  CHECK(p.format == "json");

  Json emitted = problem_to_json(p);
  Json again = problem_to_json(problem_from_json(emitted));
  CHECK(emitted.dump(2) == again.dump(2));
}

TEST_CASE("cyclotomic coefficient fields are accepted and normalized") {
  std::string text = R"({
    "ring": {"vars": ["x"], "coeff": {"cyclotomic": 6}},
    "target": {"kind": "binomial", "generators": []}
  })";
  ProblemFile p = problem_from_json(parse_json(text));
  CHECK(p.field_order == 3);  // order 6 and order 3 give the same field

  Json emitted = problem_to_json(p);
  CHECK(emitted["ring"]["coeff"]["cyclotomic"] == 3);
}

TEST_CASE("problem validation rejects malformed inputs") {
  auto parse = [](const std::string& text) { return problem_from_json(parse_json(text)); };

  REQUIRE_THROWS_AS(parse(R"({"target": {"kind": "binomial"}})"), InputError);
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": []}, "target": {"kind": "binomial"}})"),
                    InputError);
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": ["x"], "coeff": "RR"},
                              "target": {"kind": "binomial"}})"),
                    InputError);
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": ["x"]}, "module": {"rank": 0},
                              "target": {"kind": "binomial"}})"),
                    InputError);
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": ["x"]}})"), InputError);
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": ["x"]}, "target": {"kind": "ideal"}})"),
                    InputError);
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": ["x"]},
                              "target": {"kind": "congruence",
                                         "generators": [{"shift": 1}]}})"),
                    InputError);
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": ["x"]},
                              "target": {"kind": "binomial"},
                              "options": {"budget": 0}})"),
                    InputError);
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": ["x"]},
                              "target": {"kind": "binomial"},
                              "options": {"format": "xml"}})"),
                    InputError);

  // congruence targets live on a free module; defining entries are rejected
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": ["x"]},
                              "module": {"rank": 1, "defining":
                                [[{"coeff": 1, "exponents": [2], "gen": 0}]]},
                              "target": {"kind": "congruence", "generators": []}})"),
                    InputError);

  // three terms in a generator
  REQUIRE_THROWS_AS(parse(R"({"ring": {"vars": ["x"]},
                              "target": {"kind": "binomial", "generators": [
                                [{"coeff": 1, "exponents": [2], "gen": 0},
                                 {"coeff": 1, "exponents": [1], "gen": 0},
                                 {"coeff": 1, "exponents": [0], "gen": 0}]]}})"),
                    InputError);
}
