#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "opint/lower.hpp"

using namespace opint;

TEST_CASE("parsing with standard precedence") {
  // sin(x)/x is a division with the call on the left
  Expr e = parse_expression("sin(x)/x");
  CHECK(e.kind == Expr::Kind::div);
  CHECK(e.kids[0].kind == Expr::Kind::call);
  CHECK(e.kids[0].name == "sin");

  // ^ binds tighter than unary minus and is right-associative
  Expr p = parse_expression("-x^2");
  CHECK(p.kind == Expr::Kind::neg);
  CHECK(p.kids[0].kind == Expr::Kind::pow);
  Expr q = parse_expression("x^2^3");
  CHECK(q.kids[1].kind == Expr::Kind::pow);

  Expr m = parse_expression("x^2*cos(x)*exp(-x^2)");
  CHECK(m.kind == Expr::Kind::mul);

  // whitespace-insensitive
  CHECK(print_expression(parse_expression(" 1 + 2 * x ")) ==
        print_expression(parse_expression("1+2*x")));
}

TEST_CASE("parse errors carry the byte offset") {
  try {
    parse_expression("sin(");
    FAIL("expected throw");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse_expression("frob(x)"), ParseError);
  CHECK_THROWS_AS(parse_expression(""), ParseError);
  CHECK_THROWS_AS(parse_expression("1+"), ParseError);
}

TEST_CASE("print-parse round trip is idempotent") {
  std::vector<std::string> samples = {
      "sin(x)/x",       "x^2*cos(x)*exp(-x^2)", "1/(1+x^2)", "-x^3+2*x-7/3",
      "sinc(2*x)+1",    "exp(-x)*sin(3*x)",     "(x+1)^4",   "sqrt(abs(x+2))",
      "log(1+x)-x/2",
  };
  for (const auto& s : samples) {
    std::string once = print_expression(parse_expression(s));
    std::string twice = print_expression(parse_expression(once));
    CHECK(once == twice);
  }
}

TEST_CASE("printed trees evaluate to the same function") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> pt(0.2, 1.7);
  std::vector<std::string> samples = {"x^2*cos(x)*exp(-x^2)", "1/(1+x^2)", "-x^3+2*x-7/3",
                                      "log(1+x)-x/2", "sin(x)^5/x"};
  for (const auto& s : samples) {
    Expr a = bind_variable(parse_expression(s), "x");
    Expr b = bind_variable(parse_expression(print_expression(a)), "x");
    for (int it = 0; it < 8; ++it) {
      double x = pt(rng);
      auto va = eval_expression(a, {x, 0.0});
      auto vb = eval_expression(b, {x, 0.0});
      CHECK(std::abs(va - vb) < 1e-14);
    }
  }
}

TEST_CASE("parameter binding and substitution") {
  Expr e = parse_expression("(1-cos(t*x))/x^2");
  auto names = parameter_names(bind_variable(e, "x"), "x");
  REQUIRE(names.size() == 1);
  CHECK(names[0] == "t");
  Expr bound = substitute_params(e, {{"t", Scalar::parse_exact("2.5")}});
  CHECK(parameter_names(bind_variable(bound, "x"), "x").empty());

  CHECK_THROWS_AS(lower_kernel(bind_variable(e, "x")), ClassError);  // unbound t
}

TEST_CASE("series lowering") {
  auto geo = lower_series(bind_variable(parse_expression("1/(1+x^2)"), "x"), 4);
  CHECK(geo.coeffs() == std::vector<Scalar>{Scalar(1), Scalar(0), Scalar(-1), Scalar(0),
                                            Scalar(1)});
  auto c = lower_series(bind_variable(parse_expression("2"), "x"), 3);
  CHECK(c.coeff(0) == Scalar(2));
  CHECK(c.last_nonzero() == 0);

  // sin(x)/x has an exact even series
  auto s = lower_series(bind_variable(parse_expression("sin(x)/x"), "x"), 6);
  CHECK(s.coeff(0) == Scalar(1));
  CHECK(s.coeff(2) == Scalar::rational(-1, 6));

  CHECK_THROWS_AS(lower_series(bind_variable(parse_expression("abs(x)"), "x"), 4), ClassError);
  CHECK_THROWS_AS(lower_series(bind_variable(parse_expression("1/x"), "x"), 4), ClassError);
}

TEST_CASE("kernel lowering: trig powers expand into complex exponentials") {
  auto f = lower_kernel(bind_variable(parse_expression("sin(x)^5/x"), "x"));
  // frequencies {1,3,5}
  auto freqs = f.frequencies();
  REQUIRE(freqs.size() == 3);
  CHECK(freqs[0] == doctest::Approx(1.0));
  CHECK(freqs[1] == doctest::Approx(3.0));
  CHECK(freqs[2] == doctest::Approx(5.0));

  // coefficient pattern from ((e^{ix}-e^{-ix})/2i)^5: compare the lowered
  // form against brute-force complex evaluation on sample points
  for (double x : {0.3, 1.1, 2.9, -1.7}) {
    std::complex<double> brute =
        std::pow((std::exp(std::complex<double>(0, x)) - std::exp(std::complex<double>(0, -x))) /
                     std::complex<double>(0, 2),
                 5) /
        x;
    auto mine = f.eval(x);
    CHECK(std::abs(mine - brute) < 1e-13);
    CHECK(std::abs(mine.real() - std::pow(std::sin(x), 5) / x) < 1e-13);
  }

  // exactness of the weights: sum of coefficients at x=0 vanishes (odd/ x)
  auto ls = f.local_series(4);
  REQUIRE(ls.has_value());
  CHECK(ls->is_exact());
}

TEST_CASE("kernel lowering: rational integrands are refused with guidance") {
  CHECK_THROWS_WITH_AS(lower_kernel(bind_variable(parse_expression("1/(1+x^2)"), "x")),
                       doctest::Contains("series route"), ClassError);
  CHECK_THROWS_AS(lower_kernel(bind_variable(parse_expression("log(x)"), "x")), ClassError);
}

TEST_CASE("kernel lowering of scaled and constant trig arguments") {
  // sinc(2x) = sin(2x)/(2x)
  auto f = lower_kernel(bind_variable(parse_expression("sinc(2*x)"), "x"));
  for (double x : {0.4, 1.3, -2.1})
    CHECK(std::abs(f.eval(x).real() - std::sin(2 * x) / (2 * x)) < 1e-14);
  // constant arguments fold to constants
  auto c = lower_kernel(bind_variable(parse_expression("cos(2)+0*x"), "x"));
  CHECK(std::abs(c.eval(0.7).real() - std::cos(2.0)) < 1e-14);
  auto s = lower_kernel(bind_variable(parse_expression("sinc(3)+0*x"), "x"));
  CHECK(std::abs(s.eval(0.2).real() - std::sin(3.0) / 3.0) < 1e-14);
  // shifted sinc leaves the class
  CHECK_THROWS_AS(lower_kernel(bind_variable(parse_expression("sinc(x+1)"), "x")), ClassError);
}

TEST_CASE("kernel pointwise evaluation near the removable singularity") {
  auto f = lower_kernel(bind_variable(parse_expression("sin(x)^2/x^2"), "x"));
  CHECK(std::abs(f.eval(0.0).real() - 1.0) < 1e-12);
  CHECK(std::abs(f.eval(1e-5).real() - 1.0) < 1e-9);
  CHECK(std::abs(f.eval(2.0).real() - std::pow(std::sin(2.0) / 2.0, 2)) < 1e-13);
}

TEST_CASE("reciprocal substitution maps the outer piece onto [-1,1]") {
  Expr e = bind_variable(parse_expression("1/(1+x^2)"), "x");
  Expr outer = bind_variable(reciprocal_substitute(e), "x");
  // f(1/u)/u^2 = 1/(1+u^2) for this integrand
  for (double u : {0.3, 0.8, -0.5}) {
    auto v = eval_expression(outer, {u, 0.0});
    CHECK(std::abs(v.real() - 1.0 / (1.0 + u * u)) < 1e-14);
  }
}

TEST_CASE("exp-poly extraction for the Laplace side") {
  auto f = to_exp_poly(lower_kernel(bind_variable(parse_expression("x^2*exp(-x)"), "x")));
  REQUIRE(f.terms().size() == 1);
  CHECK(f.terms()[0].power == 2);
  CHECK(f.terms()[0].rate == Scalar(-1));
  CHECK(f.terms()[0].weight == Scalar(1));

  // the trace variable can be named t
  auto h = to_exp_poly(lower_kernel(bind_variable(parse_expression("exp(-t)+exp(-2*t)"), "t")));
  CHECK(h.terms().size() == 2);

  CHECK_THROWS_AS(to_exp_poly(lower_kernel(bind_variable(parse_expression("sin(x)/x"), "x"))),
                  ClassError);
}
