#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "meso/cyclotomic.hpp"
#include "meso/rational.hpp"

using namespace meso;

TEST_CASE("rationals stay canonical") {
  CHECK(rational_to_string(make_rational(2, 4)) == "1/2");
  CHECK(rational_to_string(make_rational(-6, 3)) == "-2");
  CHECK(rational_from_string("-3/6") == make_rational(-1, 2));
  CHECK_THROWS_AS(make_rational(1, 0), InputError);
  CHECK_THROWS_AS(rational_from_string("1.5"), InputError);
  CHECK(rational_pow(make_rational(3, 2), -2) == make_rational(4, 9));
}

TEST_CASE("exact rational roots") {
  Rational r;
  REQUIRE(rational_root_exact(make_rational(8), 3, &r));
  CHECK(r == 2);
  REQUIRE(rational_root_exact(make_rational(-27), 3, &r));
  CHECK(r == -3);
  REQUIRE(rational_root_exact(make_rational(4, 9), 2, &r));
  CHECK(r == make_rational(2, 3));
  CHECK_FALSE(rational_root_exact(make_rational(2), 2, &r));
  CHECK_FALSE(rational_root_exact(make_rational(-4), 2, &r));
}

TEST_CASE("cyclotomic polynomials") {
  using detail::cyclotomic_polynomial;
  CHECK(cyclotomic_polynomial(1) == detail::ZPoly{-1, 1});            // x - 1
  CHECK(cyclotomic_polynomial(2) == detail::ZPoly{1, 1});             // x + 1
  CHECK(cyclotomic_polynomial(3) == detail::ZPoly{1, 1, 1});          // x^2 + x + 1
  CHECK(cyclotomic_polynomial(4) == detail::ZPoly{1, 0, 1});          // x^2 + 1
  CHECK(cyclotomic_polynomial(6) == detail::ZPoly{1, -1, 1});         // x^2 - x + 1
  CHECK(cyclotomic_polynomial(12) == detail::ZPoly{1, 0, -1, 0, 1});  // x^4 - x^2 + 1
}

TEST_CASE("roots of unity satisfy their defining relations") {
  CHECK(zeta(3, 1) + zeta(3, 2) == Cyclo(-1));  // 1 + z + z^2 = 0
  CHECK(zeta(4).pow(2) == Cyclo(-1));
  CHECK(zeta(2) == Cyclo(-1));  // demotes to the rational -1
  CHECK(zeta(2).is_rational());
  CHECK(zeta(6).pow(3) == Cyclo(-1));
  CHECK(zeta(6) == Cyclo(1) + zeta(3));  // zeta_6 = 1 + zeta_3 since zeta_6 = -zeta_3^2
  CHECK(zeta(5).pow(5) == Cyclo(1));
  CHECK(zeta(12).pow(4) == zeta(3));
}

TEST_CASE("field axioms hold in Q(zeta_12)") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> small(-3, 3);
  auto random_elt = [&]() {
    std::vector<Rational> c(4);
    for (auto& e : c) e = make_rational(small(rng), 1 + std::abs(small(rng)));
    return Cyclo::from_coeffs(12, std::move(c));
  };
  for (int trial = 0; trial < 100; ++trial) {
    Cyclo a = random_elt(), b = random_elt(), c = random_elt();
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + (-a) == Cyclo(0));
    if (!a.is_zero()) {
      CHECK(a * a.inverse() == Cyclo(1));
      CHECK(a.pow(-2) == (a * a).inverse());
    }
  }
}

TEST_CASE("mixed-order arithmetic promotes to the compositum") {
  Cyclo x = zeta(3) + zeta(4);
  CHECK(x.order() == 12);
  CHECK(x - zeta(4) == zeta(3));
  Cyclo y = zeta(3) * zeta(5);
  CHECK(y == zeta(15, 8));  // 1/3 + 1/5 = 8/15 of a full turn
}

TEST_CASE("multiplicative orders of units") {
  CHECK(Cyclo(1).unity_order() == 1);
  CHECK(Cyclo(-1).unity_order() == 2);
  CHECK(Cyclo(2).unity_order() == 0);
  CHECK(zeta(5, 2).unity_order() == 5);
  CHECK((-zeta(3)).unity_order() == 6);
  CHECK((zeta(3) + 1).unity_order() == 6);  // equals zeta_6
}

TEST_CASE("all roots of field elements") {
  auto cube_roots_of_unity = all_roots(Cyclo(1), 3);
  REQUIRE(cube_roots_of_unity.size() == 3);
  CHECK(cube_roots_of_unity[0] == Cyclo(1));
  CHECK(cube_roots_of_unity[1] == zeta(3, 1));
  CHECK(cube_roots_of_unity[2] == zeta(3, 2));

  auto sqrt4 = all_roots(Cyclo(4), 2);
  REQUIRE(sqrt4.size() == 2);
  CHECK(((sqrt4[0] == Cyclo(2) && sqrt4[1] == Cyclo(-2)) ||
         (sqrt4[0] == Cyclo(-2) && sqrt4[1] == Cyclo(2))));

  auto cbrt_neg8 = all_roots(Cyclo(-8), 3);
  REQUIRE(cbrt_neg8.size() == 3);
  for (const auto& r : cbrt_neg8) CHECK(r.pow(3) == Cyclo(-8));

  auto sqrt_zeta3 = all_roots(zeta(3), 2);
  REQUIRE(sqrt_zeta3.size() == 2);
  for (const auto& r : sqrt_zeta3) CHECK(r * r == zeta(3));

  // sqrt(-4) exists in Q(zeta_4) even though -4 has no rational square root
  auto sqrt_neg4 = all_roots(Cyclo(-4), 2);
  REQUIRE(sqrt_neg4.size() == 2);
  for (const auto& r : sqrt_neg4) {
    CHECK(r * r == Cyclo(-4));
    CHECK(r.order() == 4);
  }

  CHECK_THROWS_AS(all_roots(Cyclo(2), 2), MissingRoot);
  try {
    all_roots(Cyclo(2), 2);
  } catch (const MissingRoot& e) {
    CHECK(e.cyclotomic_order == 0);  // no cyclotomic field contains sqrt(2)
  }
}

TEST_CASE("root field orders") {
  CHECK(root_field_order(Cyclo(1), 3) == 3);
  CHECK(root_field_order(Cyclo(1), 2) == 1);  // 1 and -1 are both rational
  CHECK(root_field_order(Cyclo(4), 2) == 1);
  CHECK(root_field_order(Cyclo(2), 2) == 0);
}
