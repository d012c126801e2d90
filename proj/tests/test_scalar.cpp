#include <doctest.h>

#include <random>

#include "opint/polynomial.hpp"
#include "opint/scalar.hpp"

using namespace opint;

TEST_CASE("exact arithmetic stays exact, floating demotes") {
  Scalar a = Scalar::rational(1, 3);
  Scalar b = Scalar::rational(1, 6);
  CHECK((a + b).is_exact());
  CHECK((a + b) == Scalar::rational(1, 2));
  CHECK((a * b) == Scalar::rational(1, 18));
  CHECK_FALSE((a + Scalar::real(0.5)).is_exact());

  Scalar i = Scalar::i();
  CHECK((i * i) == Scalar(-1));
  CHECK(i.pow(-1) == -i);
  CHECK((Scalar(2) * i).inverse() == Scalar::rational(-1, 2) * i);
}

TEST_CASE("parse_exact reads decimals and fractions exactly") {
  CHECK(Scalar::parse_exact("2.5") == Scalar::rational(5, 2));
  CHECK(Scalar::parse_exact("-0.125") == Scalar::rational(-1, 8));
  CHECK(Scalar::parse_exact("7/3") == Scalar::rational(7, 3));
  CHECK_THROWS_AS(Scalar::parse_exact("1.2.3"), Error);
}

TEST_CASE("exact square roots") {
  CHECK(*Scalar::rational(9, 4).exact_sqrt() == Scalar::rational(3, 2));
  CHECK(*Scalar(-16).exact_sqrt() == Scalar(4) * Scalar::i());
  CHECK_FALSE(Scalar(2).exact_sqrt().has_value());
  // complex: sqrt(3+4i) = 2+i
  Scalar z = Scalar(3) + Scalar(4) * Scalar::i();
  CHECK(*z.exact_sqrt() == Scalar(2) + Scalar::i());
}

TEST_CASE("polynomial division, gcd and Taylor shift") {
  // (x-1)(x-2) = x^2 - 3x + 2
  Polynomial p({Scalar(2), Scalar(-3), Scalar(1)});
  Polynomial q, r;
  Polynomial::divmod(p, Polynomial::linear_root(Scalar(1)), q, r);
  CHECK(r.is_zero());
  CHECK(q == Polynomial::linear_root(Scalar(2)));

  Polynomial g = Polynomial::gcd(p, Polynomial::linear_root(Scalar(2)));
  CHECK(g == Polynomial::linear_root(Scalar(2)).monic());

  // shift of x^2 to powers of (x-1): (t+1)^2 = 1 + 2t + t^2
  Polynomial shifted = Polynomial({Scalar(0), Scalar(0), Scalar(1)}).shifted_to(Scalar(1));
  CHECK(shifted == Polynomial({Scalar(1), Scalar(2), Scalar(1)}));
}

TEST_CASE("polynomial ring identities on random exact inputs") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> c(-5, 5), deg(0, 5);
  for (int it = 0; it < 50; ++it) {
    auto rand_poly = [&] {
      std::vector<Scalar> v(deg(rng) + 1);
      for (auto& x : v) x = Scalar::rational(c(rng), 1 + (it % 3));
      return Polynomial(std::move(v));
    };
    Polynomial a = rand_poly(), b = rand_poly(), d = rand_poly();
    CHECK((a + b) * d == a * d + b * d);
    CHECK(a * b == b * a);
    if (!b.is_zero()) {
      Polynomial q, r;
      Polynomial::divmod(a, b, q, r);
      CHECK(q * b + r == a);
    }
  }
}
