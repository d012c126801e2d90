#include <doctest.h>

#include <cmath>
#include <random>

#include "opint/laplace.hpp"
#include "opint/oracle.hpp"

using namespace opint;

TEST_CASE("forward transform of monomials and exponentials") {
  // x^n -> n!/x^{n+1}, exactly
  for (int n : {0, 1, 5, 20}) {
    auto r = laplace_forward_rational(ExpPoly({{Scalar(1), n, Scalar(0)}}));
    mpz_class f(1);
    for (int k = 2; k <= n; ++k) f *= k;
    std::vector<Scalar> den(n + 2, Scalar(0));
    den[n + 1] = Scalar(1);
    CHECK(r.equivalent(RationalFunction(
        Polynomial::constant(Scalar::from_mpq(mpq_class(f))), Polynomial(den))));
  }
  // f = 1 -> 1/x
  auto one = laplace_forward_rational(ExpPoly::constant(Scalar(1)));
  CHECK(one.equivalent(RationalFunction(Polynomial::constant(Scalar(1)), Polynomial::x())));

  // e^{2y} evaluated at x=5 -> 1/3, exactly
  Scalar v = laplace_forward_at(ExpPoly::exponential(Scalar(1), Scalar(2)), Scalar(5));
  CHECK(v == Scalar::rational(1, 3));
  CHECK_THROWS_AS(laplace_forward_at(ExpPoly::exponential(Scalar(1), Scalar(2)), Scalar(2)),
                  DomainError);

  // shift law: L[e^{ax} f](x) = L[f](x-a) on the ExpPoly class
  ExpPoly f({{Scalar(3), 2, Scalar(-1)}, {Scalar(1), 0, Scalar(-2)}});
  ExpPoly shifted({{Scalar(3), 2, Scalar(0)}, {Scalar(1), 0, Scalar(-1)}});  // rates + 1
  Scalar x(4);
  CHECK(laplace_forward_at(shifted, x) == laplace_forward_at(f, x - Scalar(1)));
}

TEST_CASE("asymptotic series image is flagged and optimally truncated") {
  // term-wise image of 1/(1+y^2): sum (-1)^q (2q)!/x^{2q+1}, divergent
  PowerSeries g = PowerSeries::known(PowerSeries::Builtin::geometric_1_over_1_plus_x2, {}, 60);
  auto v = laplace_forward_series_at(g, Scalar(10));
  CHECK(v.asymptotic);
  CHECK(v.terms_used < 30);       // optimal truncation stopped the sum early
  CHECK(v.first_dropped > 0.0);   // something was dropped
  // compare against the oracle's value of int_0^inf e^{-10 y}/(1+y^2) dy
  auto orc = oracle::quad_finite(
      [](double y) { return std::exp(-10.0 * y) / (1.0 + y * y); }, 0.0, 8.0, 1e-13);
  CHECK(std::abs(v.value.to_double() - orc.value) <= v.first_dropped + 1e-12);

  // a convergent term-wise image simply sums: e^y at x = 10 gives 1/(x-1)
  PowerSeries e = PowerSeries::known(PowerSeries::Builtin::exp, {}, 40);
  auto w = laplace_forward_series_at(e, Scalar(10));
  CHECK(std::abs(w.value.to_double() - 1.0 / 9.0) < 1e-4);
}

TEST_CASE("inverse transform of rational functions") {
  // 1/(x-a) -> e^{ax}
  for (const Scalar& a : {Scalar(-3), Scalar(0), Scalar(2)}) {
    RationalFunction f(Polynomial::constant(Scalar(1)), Polynomial::linear_root(a));
    CHECK(laplace_inverse_rational(f) == ExpPoly({{Scalar(1), 0, a}}));
  }
  // 1/x -> 1 on x > 0
  CHECK(laplace_inverse_rational(
            RationalFunction(Polynomial::constant(Scalar(1)), Polynomial::x())) ==
        ExpPoly::constant(Scalar(1)));

  // 1/(x^2+1) -> sin x
  RationalFunction osc(Polynomial::constant(Scalar(1)),
                       Polynomial({Scalar(1), Scalar(0), Scalar(1)}));
  ExpPoly inv = laplace_inverse_rational(osc);
  for (double x : {0.5, 1.0, 2.5}) {
    auto z = inv.eval(Scalar::real(x)).to_complex();
    CHECK(std::abs(z.real() - std::sin(x)) < 1e-12);
    CHECK(std::abs(z.imag()) < 1e-15);
  }

  // improper input is rejected
  CHECK_THROWS_AS(laplace_inverse_rational(
                      RationalFunction(Polynomial::x(), Polynomial::linear_root(Scalar(1)))),
                  DomainError);
  // pole order beyond the cap
  Polynomial den = Polynomial::constant(Scalar(1));
  for (int j = 0; j < 9; ++j) den = den * Polynomial::linear_root(Scalar(-1));
  CHECK_THROWS_AS(
      laplace_inverse_rational(RationalFunction(Polynomial::constant(Scalar(1)), den)),
      DomainError);
}

TEST_CASE("round trip is symbolically exact") {
  CHECK(laplace_roundtrip_check(ExpPoly::exponential(Scalar(1), Scalar(-3)), 1e-12) == 0.0);
  CHECK(laplace_roundtrip_check(ExpPoly({{Scalar(1), 2, Scalar(-1)}}), 1e-12) == 0.0);
  CHECK(laplace_roundtrip_check(ExpPoly::constant(Scalar(5)), 1e-12) == 0.0);

  // numeric cross-check of the x^2 e^{-x} case at x = 1
  ExpPoly f({{Scalar(1), 2, Scalar(-1)}});
  ExpPoly back = laplace_inverse_rational(laplace_forward_rational(f));
  CHECK(std::abs(back.eval(Scalar(1)).to_complex().real() - 0.36787944) < 1e-8);
}

TEST_CASE("randomized round trips with repeated and clustered rates") {
  std::mt19937 rng(55);
  std::uniform_int_distribution<int> nterms(1, 6), power(0, 4), q(1, 8), wv(-9, 9);
  for (int it = 0; it < 60; ++it) {
    std::vector<ExpPoly::Term> terms;
    int m = nterms(rng);
    for (int j = 0; j < m; ++j) {
      int den = q(rng);
      std::uniform_int_distribution<int> pnum(std::max(1, den / 10 + 1), 5 * den);
      int w = wv(rng);
      if (w == 0) w = 3;
      terms.push_back({Scalar(w), power(rng), -Scalar::rational(pnum(rng), den)});
    }
    ExpPoly f(std::move(terms));
    if (f.empty()) continue;
    CHECK(laplace_roundtrip_check(f, 1e-9) == 0.0);
  }
}

TEST_CASE("the half-line integral is the x -> 0+ limit of the forward transform") {
  // L[f](x) at small x approaches the integral of f over [0, inf).
  ExpPoly f({{Scalar(1), 2, Scalar(-2)}, {Scalar(3), 0, Scalar(-1)}});
  Scalar at_zero = laplace_forward_at(f, Scalar::rational(1, 1000000));
  // integral of x^2 e^{-2x} = 1/4, of 3 e^{-x} = 3
  CHECK(std::abs(at_zero.to_double() - 3.25) < 1e-5);
}

TEST_CASE("transforms are linear") {
  ExpPoly f({{Scalar(2), 1, Scalar(-1)}});
  ExpPoly g({{Scalar(1), 0, Scalar(-3)}});
  Scalar x(2);
  Scalar lhs = laplace_forward_at(f + g.scale(Scalar(5)), x);
  Scalar rhs = laplace_forward_at(f, x) + Scalar(5) * laplace_forward_at(g, x);
  CHECK(lhs == rhs);

  // inverse side: L^{-1}[a F + b G] = a L^{-1}F + b L^{-1}G
  RationalFunction F(Polynomial::constant(Scalar(1)), Polynomial::linear_root(Scalar(-1)));
  RationalFunction G(Polynomial::constant(Scalar(1)), Polynomial::linear_root(Scalar(-2)));
  RationalFunction sum = F + G;
  ExpPoly inv_sum = laplace_inverse_rational(sum);
  ExpPoly want = laplace_inverse_rational(F) + laplace_inverse_rational(G);
  CHECK(inv_sum == want);
}

TEST_CASE("partial fraction reconstruction reproduces the input") {
  // build R from known factors, invert, re-transform, compare exactly
  ExpPoly f({{Scalar(2), 1, Scalar(-1)}, {Scalar(-3), 0, Scalar(-2)}, {Scalar(1), 3, Scalar(-1)}});
  RationalFunction r = laplace_forward_rational(f);
  ExpPoly inv = laplace_inverse_rational(r);
  RationalFunction r2 = laplace_forward_rational(inv);
  CHECK(r.equivalent(r2));
}

TEST_CASE("polynomial roots: exact, snapped and numeric") {
  // exact quadratic with complex pair
  auto f = polynomial_roots(Polynomial({Scalar(5), Scalar(-2), Scalar(1)}));
  REQUIRE(f.size() == 2);
  CHECK(f[0].root.is_exact());
  // cubic with rational roots 1/2, -3, 2: 2x^3+x^2-13x+6 = (2x-1)(x+3)(x-2)
  auto g = polynomial_roots(Polynomial({Scalar(6), Scalar(-13), Scalar(1), Scalar(2)}));
  REQUIRE(g.size() == 3);
  for (const auto& fac : g) CHECK(fac.root.is_exact());
  // repeated root detected through the gcd chain: (x-1)^2 (x+2)
  Polynomial rep = Polynomial::linear_root(Scalar(1)) * Polynomial::linear_root(Scalar(1)) *
                   Polynomial::linear_root(Scalar(-2));
  auto h = polynomial_roots(rep);
  int mult_sum = 0;
  for (const auto& fac : h) mult_sum += fac.multiplicity;
  CHECK(mult_sum == 3);
  bool saw_double = false;
  for (const auto& fac : h)
    if (fac.multiplicity == 2 && fac.root == Scalar(1)) saw_double = true;
  CHECK(saw_double);
}

TEST_CASE("heat trace and spectral comb") {
  SpectralComb comb({{Scalar(1), Scalar(1)}, {Scalar(2), Scalar(1)}});
  CHECK(std::abs(heat_trace(comb, 1.0) - 0.5032147244) < 1e-9);
  CHECK(std::abs(heat_trace(comb, 1.0) - (std::exp(-1.0) + std::exp(-2.0))) < 1e-15);

  // monotone decay to zero
  double prev = heat_trace(comb, 0.5);
  for (double t = 1.0; t < 40; t *= 2) {
    double cur = heat_trace(comb, t);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(prev < 1e-8);

  // half life of a single line
  SpectralComb single({{Scalar(3), Scalar(1)}});
  CHECK(heat_trace(single, std::log(2.0) / 3.0) == doctest::Approx(0.5));

  CHECK_THROWS_AS(heat_trace(comb, 0.0), DomainError);
  CHECK_THROWS_AS(SpectralComb({{Scalar(-1), Scalar(1)}}), DomainError);
}

TEST_CASE("spectrum recovery is the exact inverse of the trace") {
  auto trace = ExpPoly({{Scalar(1), 0, Scalar(-1)}, {Scalar(1), 0, Scalar(-2)}});
  SpectralComb want({{Scalar(1), Scalar(1)}, {Scalar(2), Scalar(1)}});
  CHECK(spectrum_recover(trace) == want);

  CHECK(spectrum_recover(ExpPoly({{Scalar(3), 0, Scalar(-5)}})) ==
        SpectralComb({{Scalar(5), Scalar(3)}}));

  CHECK_THROWS_AS(spectrum_recover(ExpPoly({{Scalar(1), 1, Scalar(-1)}})), DomainError);
  CHECK_THROWS_AS(spectrum_recover(ExpPoly({{Scalar(1), 0, Scalar(2)}})), DomainError);

  // duplicate rates merge by weight addition
  SpectralComb merged({{Scalar(2), Scalar(1)}, {Scalar(2), Scalar(3)}});
  CHECK(merged.lines().size() == 1);
  CHECK(merged.lines()[0].weight == Scalar(4));
}

TEST_CASE("comb rendering") {
  SpectralComb comb({{Scalar(1), Scalar(1)}});
  CombRenderScheme reg;
  reg.width = 0.01;
  auto peak = comb_render(comb, reg, {1.0});
  CHECK(peak[0] == doctest::Approx(1.0 / std::sqrt(4.0 * M_PI * 0.01)));

  // empty comb renders to zeros
  auto zeros = comb_render(SpectralComb(), reg, {0.0, 1.0, 2.0});
  for (double v : zeros) CHECK(v == 0.0);

  // total mass close to the weight sum (trapezoid oracle)
  int n = 4001;
  std::vector<double> grid(n);
  for (int k = 0; k < n; ++k) grid[k] = -1.0 + 4.0 * k / (n - 1);
  auto vals = comb_render(comb, reg, grid);
  double h = 4.0 / (n - 1), mass = 0.0;
  for (int k = 0; k < n; ++k) mass += vals[k] * (k == 0 || k == n - 1 ? 0.5 : 1.0) * h;
  CHECK(std::abs(mass - 1.0) < 1e-3);
}
