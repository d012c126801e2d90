#include <doctest.h>

#include <cmath>
#include <random>

#include "opint/power_series.hpp"

using namespace opint;
using B = PowerSeries::Builtin;

namespace {
PowerSeries random_exact_series(std::mt19937& rng, int order) {
  std::uniform_int_distribution<int> c(-4, 4), d(1, 3);
  std::vector<Scalar> v(order + 1);
  for (auto& x : v) x = Scalar::rational(c(rng), d(rng));
  return PowerSeries(std::move(v));
}
}  // namespace

TEST_CASE("builtin Maclaurin coefficients") {
  auto sinc = PowerSeries::known(B::sinc, {}, 4);
  CHECK(sinc.coeff(0) == Scalar(1));
  CHECK(sinc.coeff(1) == Scalar(0));
  CHECK(sinc.coeff(2) == Scalar::rational(-1, 6));
  CHECK(sinc.coeff(3) == Scalar(0));
  CHECK(sinc.coeff(4) == Scalar::rational(1, 120));

  auto e = PowerSeries::known(B::exp, {}, 2);
  CHECK(e.coeff(0) == Scalar(1));
  CHECK(e.coeff(1) == Scalar(1));
  CHECK(e.coeff(2) == Scalar::rational(1, 2));

  auto g = PowerSeries::known(B::geometric_1_over_1_plus_x2, {}, 4);
  CHECK(g.coeff(0) == Scalar(1));
  CHECK(g.coeff(2) == Scalar(-1));
  CHECK(g.coeff(4) == Scalar(1));
  CHECK(g.coeff(1) == Scalar(0));

  CHECK_THROWS_AS(PowerSeries::known(B::exp, {Scalar(1)}, 4), Error);
  CHECK_THROWS_AS(PowerSeries::builtin_from_name("sech"), Error);
}

TEST_CASE("arithmetic matches the worked examples") {
  PowerSeries a({Scalar(1), Scalar(2)});
  PowerSeries b({Scalar(0), Scalar(1)});
  CHECK((a + b).coeffs() == std::vector<Scalar>{Scalar(1), Scalar(3)});

  PowerSeries x = PowerSeries::monomial(1, 2);
  auto x2 = x * x;
  CHECK(x2.coeff(2) == Scalar(1));
  CHECK(x2.coeff(1) == Scalar(0));

  // exp composed with -x
  auto em = PowerSeries::known(B::exp, {}, 4).compose(PowerSeries::monomial(1, 4).scale(Scalar(-1)));
  CHECK(em.coeff(0) == Scalar(1));
  CHECK(em.coeff(1) == Scalar(-1));
  CHECK(em.coeff(2) == Scalar::rational(1, 2));
  CHECK(em.coeff(3) == Scalar::rational(-1, 6));
  CHECK(em.coeff(4) == Scalar::rational(1, 24));

  CHECK_THROWS_AS(PowerSeries::known(B::exp, {}, 4).compose(PowerSeries::constant(Scalar(1), 4)),
                  Error);

  // mismatched expansion points are rejected
  PowerSeries centered({Scalar(1), Scalar(1)}, Scalar(3));
  CHECK_THROWS_AS(centered + PowerSeries::monomial(1, 1), Error);
}

TEST_CASE("calculus maps coefficients as the shift rule says") {
  PowerSeries e({Scalar(1), Scalar(1), Scalar::rational(1, 2)});
  auto d = e.differentiate();
  CHECK(d.coeffs() == std::vector<Scalar>{Scalar(1), Scalar(1)});

  PowerSeries s({Scalar(1), Scalar(0), Scalar::rational(-1, 6)});
  auto anti = s.antiderivative();
  CHECK(anti.coeff(0) == Scalar(0));
  CHECK(anti.coeff(1) == Scalar(1));
  CHECK(anti.coeff(3) == Scalar::rational(-1, 18));
}

TEST_CASE("differentiate after antiderivative is the identity") {
  std::mt19937 rng(11);
  for (int it = 0; it < 30; ++it) {
    PowerSeries s = random_exact_series(rng, 8);
    CHECK(s.antiderivative().differentiate() == s);
    // the other order loses the constant term
    auto back = s.differentiate().antiderivative();
    for (int k = 1; k <= back.order() && k <= s.order(); ++k)
      CHECK(back.coeff(k) == s.coeff(k));
  }
}

TEST_CASE("ring axioms up to truncation on random exact series") {
  std::mt19937 rng(23);
  for (int it = 0; it < 30; ++it) {
    PowerSeries a = random_exact_series(rng, 8);
    PowerSeries b = random_exact_series(rng, 8);
    PowerSeries c = random_exact_series(rng, 8);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a.is_exact());
  }
}

TEST_CASE("evaluation with tail estimate") {
  auto e = PowerSeries::known(B::exp, {}, 20);
  auto r = e.eval(Scalar(1));
  CHECK(std::abs(r.value.to_double() - std::exp(1.0)) < 1e-12);

  PowerSeries s({Scalar(7), Scalar(1), Scalar(4)});
  CHECK(s.eval(Scalar(0)).value == Scalar(7));

  auto g = PowerSeries::known(B::geometric_1_over_1_plus_x2, {}, 40);
  auto rg = g.eval(Scalar::rational(1, 2));
  CHECK(std::abs(rg.value.to_double() - 0.8) < 1e-10);
  CHECK(rg.bounded);
  CHECK(std::abs(rg.value.to_double() - 0.8) <= rg.tail_estimate + 1e-15);
}

TEST_CASE("series evaluation agrees with direct evaluation inside half the disc") {
  struct Case {
    B b;
    double (*f)(double);
    double half_radius;  // half the known radius (finite only for geometric)
  };
  auto sinc_fn = +[](double x) { return x == 0 ? 1.0 : std::sin(x) / x; };
  auto geom_fn = +[](double x) { return 1.0 / (1.0 + x * x); };
  auto gauss_fn = +[](double x) { return std::exp(-x * x); };
  Case cases[] = {
      {B::sin, +[](double x) { return std::sin(x); }, 2.0},
      {B::cos, +[](double x) { return std::cos(x); }, 2.0},
      {B::exp, +[](double x) { return std::exp(x); }, 2.0},
      {B::sinc, sinc_fn, 2.0},
      {B::geometric_1_over_1_plus_x2, geom_fn, 0.5},
      {B::gaussian, gauss_fn, 2.0},
  };
  for (const auto& c : cases) {
    auto s = PowerSeries::known(c.b, {}, 48);
    for (double x = -c.half_radius; x <= c.half_radius; x += c.half_radius / 4) {
      auto r = s.eval(Scalar::real(x));
      CHECK(r.bounded);
      CHECK(std::abs(r.value.to_double() - c.f(x)) <= r.tail_estimate + 1e-13);
    }
  }
}

TEST_CASE("radius estimate separates geometric from entire series") {
  double rg = PowerSeries::known(B::geometric_1_over_1_plus_x2, {}, 64).radius_estimate();
  CHECK(rg == doctest::Approx(1.0).epsilon(1e-6));
  // the ratio test on a truncated entire series grows with the order
  CHECK(PowerSeries::known(B::exp, {}, 64).radius_estimate() > 30.0);
  CHECK(PowerSeries::known(B::exp, {}, 64).radius_estimate() >
        PowerSeries::known(B::exp, {}, 16).radius_estimate());
  CHECK(std::isinf(PowerSeries::monomial(3, 12).radius_estimate()));
}

TEST_CASE("invariants: length and zero series") {
  PowerSeries z = PowerSeries::zero(5);
  CHECK(static_cast<int>(z.coeffs().size()) == z.order() + 1);
  CHECK(z.eval(Scalar(17)).value == Scalar(0));
  CHECK_THROWS_AS(PowerSeries::zero(-1), Error);
}
