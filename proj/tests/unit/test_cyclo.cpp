#include <random>

#include "doctest.h"
#include "holgr/cyclo.hpp"

using namespace holgr;

namespace {

CycloNum random_cyclo(std::mt19937& rng, long m) {
  std::uniform_int_distribution<int> d(-4, 4);
  std::vector<Rational> c(static_cast<std::size_t>(m));
  for (auto& x : c) x = Rational(d(rng), 1 + (d(rng) + 4) % 3);
  return CycloNum::from_exponents(m, c);
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<long>{-1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<long>{1, 0, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<long>{1, -1, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<long>{1, 0, -1, 0, 1});
  for (long m : {1, 3, 8, 15, 60, 105}) CHECK(static_cast<long>(cyclotomic_polynomial(m).size()) == euler_phi(m) + 1);
  // Phi_105 is the first with a coefficient of absolute value 2.
  const auto& p105 = cyclotomic_polynomial(105);
  CHECK(std::find(p105.begin(), p105.end(), -2) != p105.end());
}

TEST_CASE("basic identities") {
  CHECK(CycloNum::zeta(4) * CycloNum::zeta(4) == CycloNum(Rational(-1)));
  CycloNum s(5);
  for (int k = 0; k < 5; ++k) s += CycloNum::zeta(5, k);
  CHECK(s.is_zero());
  // Oracle: solve (1 + z)(u + v z) = 1 over Q with z^2 = -1 - z, i.e. u - v = 1 and u = 0.
  CycloNum a = CycloNum(Rational(1)) + CycloNum::zeta(3);
  CHECK(a.inv() == -CycloNum::zeta(3));
  CHECK(a * a.inv() == CycloNum(Rational(1)));
  CHECK_THROWS_AS(CycloNum(3).inv(), ArithmeticError);
}

TEST_CASE("galois action") {
  CHECK(CycloNum::zeta(3).galois(2) == CycloNum::zeta(3, 2));
  auto z = CycloNum::zeta(12);
  CHECK(z.galois(5) == CycloNum::zeta(12, 5));
  CHECK(z.galois(5).galois(5) == z);
  CHECK_THROWS_AS(z.galois(3), ArithmeticError);
  std::mt19937 rng(7);
  for (int t = 0; t < 20; ++t) {
    auto x = random_cyclo(rng, 12), y = random_cyclo(rng, 12);
    for (long k : {1, 5, 7, 11}) {
      CHECK((x * y).galois(k) == x.galois(k) * y.galois(k));
      CHECK((x + y).galois(k) == x.galois(k) + y.galois(k));
    }
    CHECK(x.galois(5).galois(7) == x.galois(35 % 12));
  }
  CHECK(CycloNum(Rational(3, 7), 12).galois(5) == CycloNum(Rational(3, 7)));
}

TEST_CASE("field axioms on random triples") {
  std::mt19937 rng(11);
  for (long m : {1, 3, 4, 5, 8, 12, 60}) {
    for (int t = 0; t < 6; ++t) {
      auto a = random_cyclo(rng, m), b = random_cyclo(rng, m), c = random_cyclo(rng, m);
      CHECK((a * b) * c == a * (b * c));
      CHECK((a + b) * c == a * c + b * c);
      CHECK(a * b == b * a);
      if (!a.is_zero()) CHECK(a * a.inv() == CycloNum(Rational(1)));
    }
  }
}

TEST_CASE("embedding compatibility") {
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) {
    auto a = random_cyclo(rng, 3), b = random_cyclo(rng, 3);
    CHECK((a * b).embed(12) == a.embed(12) * b.embed(12));
    CHECK((a + b).embed(12) == a.embed(12) + b.embed(12));
    CHECK((a * b).embed(12).descend(3) == a * b);
  }
  // Mixed conductors meet in the lcm.
  auto s = CycloNum::zeta(3) + CycloNum::zeta(4);
  CHECK(s.conductor() == 12);
  CHECK(s.minimal_conductor() == 12);
  CHECK((CycloNum::zeta(12, 4)).minimal_conductor() == 3);
  CHECK(CycloNum::zeta(6).minimal_conductor() == 3);
}

TEST_CASE("integrality and text form") {
  CHECK(CycloNum::zeta(5).is_algebraic_integer());
  CHECK_FALSE((CycloNum::zeta(5) * Rational(1, 2)).is_algebraic_integer());
  CHECK(CycloNum(Rational(5, 3)).to_string() == "5/3");
  CHECK(CycloNum::zeta(3).to_string() == "1*z @3");
  auto sqrtm3 = CycloNum::zeta(3) - CycloNum::zeta(3, 2);
  CHECK(sqrtm3 * sqrtm3 == CycloNum(Rational(-3)));
  CHECK(sqrtm3.min_coeff_valuation(3) == 0);
}

TEST_CASE("p-adic valuations") {
  CHECK(padic_valuation(Integer(12), 2) == 2);
  CHECK(padic_valuation(Rational(1, 9), 3) == -2);
  CHECK_FALSE(padic_valuation(Rational(0), 5).has_value());
  CHECK(RationalVal::of(Rational(0), 5).to_string() == "inf");
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-50, 50);
  for (int t = 0; t < 200; ++t) {
    Rational x(d(rng), 1 + (d(rng) + 50)), y(d(rng), 1 + (d(rng) + 50));
    x.canonicalize();
    y.canonicalize();
    auto vx = padic_valuation(x, 2), vy = padic_valuation(y, 2), vxy = padic_valuation(Rational(x * y), 2);
    if (vx && vy) CHECK(*vxy == *vx + *vy);
    auto vs = padic_valuation(Rational(x + y), 2);
    if (vx && vy && vs) CHECK(*vs >= std::min(*vx, *vy));
  }
}
