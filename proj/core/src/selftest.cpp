#include "opint/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "opint/integrate.hpp"
#include "opint/laplace.hpp"
#include "opint/lower.hpp"
#include "opint/oracle.hpp"

namespace opint {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

KernelIntegrand kernel_of(const std::string& text,
                          const std::map<std::string, Scalar>& params = {}) {
  Expr e = parse_expression(text);
  e = substitute_params(e, params);
  e = bind_variable(e, "x");
  return lower_kernel(e);
}

struct Tally {
  int checked = 0;
  std::ostringstream fail;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    ++checked;
    if (!cond) {
      if (!ok) fail << "; ";
      fail << what;
      ok = false;
    }
  }
  CheckResult result(int id, const std::string& name, const std::string& summary) {
    CheckResult r;
    r.id = id;
    r.name = name;
    r.pass = ok;
    r.detail = ok ? summary + " (" + std::to_string(checked) + " checks)" : fail.str();
    return r;
  }
};

double real_of(const IntegralResult& r) { return r.value.to_complex().real(); }

// --- criterion 1: exact kernel route on the worked integral suite ---------

CheckResult criterion1() {
  Tally t;
  auto pol = ConstantPolicy::symbolic();
  auto reg = RegScheme::gaussian();
  auto near = [&](double got, double want, const std::string& what) {
    t.expect(std::abs(got - want) <= 1e-9, what + " got " + std::to_string(got));
  };

  near(real_of(integrate_half_line(kernel_of("sin(x)/x"), HalfLineSide::positive, pol, 1e-9)),
       kPi / 2, "half-line sinc");
  near(real_of(integrate_real_line(kernel_of("sin(x)/x"), RealLineRoute::delta, reg, pol, 1e-9)),
       kPi, "real-line sinc");
  near(real_of(integrate_real_line(kernel_of("sin(x)^5/x"), RealLineRoute::delta, reg, pol, 1e-9)),
       3 * kPi / 8, "sin^5(x)/x");
  near(real_of(integrate_real_line(kernel_of("sin(x)^2/x^2"), RealLineRoute::delta, reg, pol, 1e-9)),
       kPi, "sin^2/x^2");
  for (const char* tv : {"-2.5", "0.5", "3"}) {
    Scalar tval = Scalar::parse_exact(tv);
    auto f = kernel_of("(1-cos(t*x))/x^2", {{"t", tval}});
    near(real_of(integrate_real_line(f, RealLineRoute::delta, reg, pol, 1e-9)),
         kPi * std::abs(tval.to_double()), std::string("(1-cos(t x))/x^2 at t=") + tv);
  }
  near(real_of(integrate_real_line(kernel_of("x^2*cos(x)*exp(-x^2)"), RealLineRoute::delta, reg,
                                   pol, 1e-9)),
       std::sqrt(kPi) * std::exp(-0.25) / 4, "x^2 cos x e^{-x^2}");
  return t.result(1, "exact kernel route, worked integral suite", "all values within 1e-9");
}

// --- criterion 2: series route and split ----------------------------------

CheckResult criterion2() {
  Tally t;
  Expr e = bind_variable(parse_expression("1/(1+x^2)"), "x");
  PowerSeries s = lower_series(e, 200);
  auto r = integrate_finite(s, Scalar(-1), Scalar(1), 1e-6);
  t.expect(std::abs(real_of(r) - kPi / 2) <= 1e-6,
           "series value error " + std::to_string(std::abs(real_of(r) - kPi / 2)));
  t.expect(r.diagnostics.truncation_order <= 200, "order above 200");

  PowerSeries outer = lower_series(bind_variable(reciprocal_substitute(e), "x"), 200);
  auto total = integrate_finite_split({{s, Scalar(-1), Scalar(1)}, {outer, Scalar(-1), Scalar(1)}},
                                      1e-6);
  t.expect(std::abs(real_of(total) - kPi) <= 2e-6,
           "split value error " + std::to_string(std::abs(real_of(total) - kPi)));

  // Exact partial sums: doubling the [-1,1] piece gives 4 sum (-1)^n/(2n+1).
  auto sums = finite_series_partial_sums(s, Scalar(-1), Scalar(1));
  bool exact_ok = true;
  Scalar leibniz(0);
  for (int n = 0; n <= s.order(); ++n) {
    if (n % 2 == 0) {
      Scalar term = Scalar::rational((n / 2) % 2 == 0 ? 4 : -4, n + 1);
      leibniz += term;
    }
    if (!(sums[n] + sums[n] == leibniz)) exact_ok = false;
    if (!sums[n].is_exact()) exact_ok = false;
  }
  t.expect(exact_ok, "partial sums do not match 4*sum (-1)^n/(2n+1) exactly");
  return t.result(2, "series route on [-1,1] and reflection split", "pi/2 and pi reproduced");
}

// --- criterion 3: Laplace laws ---------------------------------------------

CheckResult criterion3() {
  Tally t;
  // monomial law, exact
  for (int n = 0; n <= 20; ++n) {
    auto r = laplace_forward_rational(ExpPoly({{Scalar(1), n, Scalar(0)}}));
    mpz_class f(1);
    for (int k = 2; k <= n; ++k) f *= k;
    std::vector<Scalar> den(n + 2, Scalar(0));
    den[n + 1] = Scalar(1);
    RationalFunction want(Polynomial::constant(Scalar::from_mpq(mpq_class(f))),
                          Polynomial(den));
    t.expect(r.equivalent(want), "L[x^" + std::to_string(n) + "] mismatch");
  }
  // inverse of simple poles, exact
  {
    std::vector<Scalar> rates = {Scalar(-3), Scalar(0), Scalar(2),
                                 Scalar::from_mpq(mpq_class(1), mpq_class(2))};
    for (const Scalar& a : rates) {
      RationalFunction f(Polynomial::constant(Scalar(1)), Polynomial::linear_root(a));
      ExpPoly inv = laplace_inverse_rational(f);
      t.expect(inv == ExpPoly({{Scalar(1), 0, a}}), "L^{-1}[1/(x-a)] inexact for a=" + a.str());
    }
    // complex pole with conjugate pairing: (x-1)/(x^2-2x+5) -> e^x cos(2x)
    RationalFunction f(Polynomial({Scalar(-1), Scalar(1)}),
                       Polynomial({Scalar(5), Scalar(-2), Scalar(1)}));
    ExpPoly inv = laplace_inverse_rational(f);
    Scalar half = Scalar::rational(1, 2);
    ExpPoly want({{half, 0, Scalar(1) + Scalar(2) * Scalar::i()},
                  {half, 0, Scalar(1) - Scalar(2) * Scalar::i()}});
    t.expect(inv == want, "conjugate pair inverse inexact");
    // the complex rate itself, exactly
    RationalFunction g(Polynomial::constant(Scalar(1)),
                       Polynomial::linear_root(Scalar(1) + Scalar(2) * Scalar::i()));
    t.expect(laplace_inverse_rational(g) ==
                 ExpPoly({{Scalar(1), 0, Scalar(1) + Scalar(2) * Scalar::i()}}),
             "complex simple pole inexact");
    double imag_worst = 0.0;
    for (int k = 1; k <= 20; ++k)
      imag_worst = std::max(imag_worst,
                            std::abs(inv.eval(Scalar::real(0.4 * k)).to_complex().imag()));
    t.expect(imag_worst <= 1e-9, "paired inverse not real on the axis");
  }
  // randomized symbolic round trip
  {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> nterms(1, 6), powers(0, 4), dend(1, 8),
        wnum(-9, 9);
    int bad = 0;
    for (int it = 0; it < 100; ++it) {
      std::vector<ExpPoly::Term> terms;
      int m = nterms(rng);
      for (int j = 0; j < m; ++j) {
        int q = dend(rng);
        std::uniform_int_distribution<int> pnum(std::max(1, q / 10 + 1), 5 * q);
        Scalar rate = -Scalar::rational(pnum(rng), q);
        int w = wnum(rng);
        if (w == 0) w = 1;
        terms.push_back({Scalar(w), powers(rng), rate});
      }
      ExpPoly f(std::move(terms));
      if (f.empty()) continue;
      if (laplace_roundtrip_check(f, 1e-9) != 0.0) ++bad;
    }
    t.expect(bad == 0, std::to_string(bad) + " of 100 round trips not symbolically exact");
  }
  return t.result(3, "Laplace transform laws", "monomial law, pole inverses, 100 round trips");
}

// --- criterion 4: spectrum recovery ----------------------------------------

CheckResult criterion4() {
  Tally t;
  std::mt19937 rng(987654);
  std::uniform_int_distribution<int> nlines(1, 6), rnum(1, 24), rden(1, 4), wnum(1, 9);
  for (int it = 0; it < 50; ++it) {
    std::vector<SpectralComb::Line> lines;
    int m = nlines(rng);
    for (int j = 0; j < m; ++j)
      lines.push_back({Scalar::rational(rnum(rng), rden(rng)), Scalar::rational(wnum(rng), 1)});
    SpectralComb comb(std::move(lines));
    SpectralComb rec = spectrum_recover(heat_trace_exppoly(comb));
    t.expect(rec == comb, "comb round trip failed at iteration " + std::to_string(it));
    if (!t.ok) break;
  }
  // render mass
  {
    SpectralComb comb({{Scalar(1), Scalar(1)},
                       {Scalar::rational(5, 2), Scalar(2)},
                       {Scalar(4), Scalar::rational(1, 2)}});
    CombRenderScheme reg;
    reg.width = 0.002;
    int n = 8001;
    std::vector<double> grid(n);
    double lo = -2.0, hi = 8.0;
    for (int k = 0; k < n; ++k) grid[k] = lo + (hi - lo) * k / (n - 1);
    auto vals = comb_render(comb, reg, grid);
    double h = (hi - lo) / (n - 1);
    double mass = 0.0;
    for (int k = 0; k < n; ++k)
      mass += vals[k] * (k == 0 || k == n - 1 ? 0.5 : 1.0) * h;
    t.expect(std::abs(mass - 3.5) <= 1e-3, "render mass " + std::to_string(mass));
  }
  return t.result(4, "heat-trace spectrum recovery", "50 random combs recovered exactly");
}

// --- criterion 5: operator algebra -----------------------------------------

CheckResult criterion5() {
  Tally t;
  const int N = 24;
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> coeff(-6, 6);
  for (int deg = 0; deg <= 10; ++deg) {
    Scalar r = commutator_derivative_check(PowerSeries::monomial(deg, deg), N);
    t.expect(r.is_exact() && r.is_zero(),
             "commutator residual nonzero for x^" + std::to_string(deg));
  }
  for (int it = 0; it < 20; ++it) {
    std::vector<Scalar> c(11);
    for (auto& v : c) v = Scalar(coeff(rng));
    Scalar r = commutator_derivative_check(PowerSeries(std::move(c)), N);
    t.expect(r.is_exact() && r.is_zero(), "commutator residual nonzero for random poly");
  }
  // FTC on exact polynomials (degree <= 8, carried with slack order)
  for (int it = 0; it < 20; ++it) {
    std::vector<Scalar> c(21, Scalar(0));
    for (int k = 0; k <= 8; ++k) c[k] = Scalar::rational(coeff(rng), 1 + it % 3);
    PowerSeries f(std::move(c));
    Scalar a = Scalar::rational(coeff(rng), 4), b = Scalar::rational(coeff(rng), 3);
    auto r = integrate_finite(f.differentiate(), a, b, 1e-12);
    Scalar want = f.eval(b).value - f.eval(a).value;
    t.expect(r.value == want, "FTC not exact on polynomial");
  }
  // FTC on truncated transcendental series over [-1, 1]
  for (auto b : {PowerSeries::Builtin::exp, PowerSeries::Builtin::sin, PowerSeries::Builtin::cos}) {
    PowerSeries f = PowerSeries::known(b, {}, 64);
    auto r = integrate_finite(f.differentiate(), Scalar(-1), Scalar(1), 1e-9);
    Scalar want = f.eval(Scalar(1)).value - f.eval(Scalar(-1)).value;
    t.expect((r.value - want).abs() <= 1e-9, "FTC error above 1e-9 on truncated series");
  }
  return t.result(5, "operator-matrix commutator and calculus identity", "exact residuals");
}

// --- criterion 6: w-route eps independence ----------------------------------

CheckResult criterion6() {
  Tally t;
  auto reg = RegScheme::gaussian();
  for (const char* text : {"sin(x)/x", "x^2*cos(x)*exp(-x^2)"}) {
    auto r = integrate_real_line(kernel_of(text), RealLineRoute::w, reg,
                                 ConstantPolicy::zero(), 1e-6);
    t.expect(r.diagnostics.eps_spread <= 1e-6,
             std::string(text) + " spread " + std::to_string(r.diagnostics.eps_spread));
  }
  return t.result(6, "w-route eps independence", "spread below 1e-6 at eps in {-0.5,0,0.3,1}");
}

// --- criterion 7: regularization cross-check --------------------------------

bool has_decreasing_run(const std::vector<ConvergenceRow>& rows) {
  int run = 0;
  for (size_t k = 2; k < rows.size(); ++k) {
    if (rows[k].delta_prev <= rows[k - 1].delta_prev + 1e-300) {
      if (++run >= 3) return true;
    } else {
      run = 0;
    }
  }
  return run >= 3 || (!rows.empty() && rows.back().delta_prev <= 1e-12);
}

CheckResult criterion7() {
  Tally t;
  auto pol = ConstantPolicy::symbolic();
  std::vector<std::pair<std::string, std::map<std::string, Scalar>>> integrands = {
      {"sin(x)/x", {}},
      {"sin(x)^5/x", {}},
      {"sin(x)^2/x^2", {}},
      {"(1-cos(t*x))/x^2", {{"t", Scalar(3)}}},
      {"x^2*cos(x)*exp(-x^2)", {}},
  };
  for (const auto& [text, params] : integrands) {
    auto f = kernel_of(text, params);
    auto g = integrate_real_line(f, RealLineRoute::delta, RegScheme::gaussian(), pol, 1e-4, true);
    auto s = integrate_real_line(f, RealLineRoute::delta, RegScheme::sinc(), pol, 1e-4, true);
    double diff = std::abs(real_of(g) - real_of(s));
    t.expect(diff <= 1e-4, text + ": schedules differ by " + std::to_string(diff));
    t.expect(has_decreasing_run(g.diagnostics.rows),
             text + ": gaussian deltas not decreasing");
    t.expect(has_decreasing_run(s.diagnostics.rows), text + ": sinc deltas not decreasing");
  }
  return t.result(7, "gaussian vs sinc regularization", "schedules agree within 1e-4");
}

// --- criterion 8: oracle agreement ------------------------------------------

CheckResult criterion8() {
  Tally t;
  auto pol = ConstantPolicy::symbolic();
  auto reg = RegScheme::gaussian();
  struct Case {
    const char* text;
    std::map<std::string, Scalar> params;
    oracle::Integrand f;
    double block;  // tail block length hint for the oracle
  };
  const double pi = kPi;
  std::vector<Case> cases = {
      {"sin(x)/x", {}, [](double x) { return x == 0 ? 1.0 : std::sin(x) / x; }, pi},
      {"sin(x)^5/x", {},
       [](double x) { return x == 0 ? 0.0 : std::pow(std::sin(x), 5) / x; }, pi},
      {"sin(x)^2/x^2", {},
       [](double x) { return x == 0 ? 1.0 : std::pow(std::sin(x) / x, 2); }, pi},
      {"(1-cos(t*x))/x^2", {{"t", Scalar::parse_exact("-2.5")}},
       [](double x) {
         return x == 0 ? 0.5 * 2.5 * 2.5 : (1.0 - std::cos(-2.5 * x)) / (x * x);
       },
       2.0 * pi / 2.5},
      {"(1-cos(t*x))/x^2", {{"t", Scalar::parse_exact("0.5")}},
       [](double x) {
         return x == 0 ? 0.5 * 0.5 * 0.5 : (1.0 - std::cos(0.5 * x)) / (x * x);
       },
       2.0 * pi / 0.5},
      {"(1-cos(t*x))/x^2", {{"t", Scalar::parse_exact("3")}},
       [](double x) {
         return x == 0 ? 0.5 * 3.0 * 3.0 : (1.0 - std::cos(3.0 * x)) / (x * x);
       },
       2.0 * pi / 3.0},
      {"x^2*cos(x)*exp(-x^2)", {},
       [](double x) { return x * x * std::cos(x) * std::exp(-x * x); }, pi},
  };
  for (const auto& c : cases) {
    auto mine = integrate_real_line(kernel_of(c.text, c.params), RealLineRoute::delta, reg, pol,
                                    1e-9);
    oracle::UnboundedOptions opt;
    opt.tol = 1e-9;
    opt.block = c.block;
    auto orc = oracle::quad_unbounded(c.f, oracle::Domain::real_line, opt);
    double diff = std::abs(real_of(mine) - orc.value);
    t.expect(diff <= 1e-6, std::string(c.text) + " oracle delta " + std::to_string(diff));
  }
  {
    auto mine = integrate_half_line(kernel_of("sin(x)/x"), HalfLineSide::positive, pol, 1e-9);
    auto orc = oracle::quad_unbounded([](double x) { return x == 0 ? 1.0 : std::sin(x) / x; },
                                      oracle::Domain::half_line, 1e-9);
    t.expect(std::abs(real_of(mine) - orc.value) <= 1e-6, "half-line sinc oracle delta");
  }
  {
    Expr e = bind_variable(parse_expression("1/(1+x^2)"), "x");
    auto mine = integrate_finite(lower_series(e, 200), Scalar(-1), Scalar(1), 1e-6);
    auto orc = oracle::quad_finite([](double x) { return 1.0 / (1.0 + x * x); }, -1, 1, 1e-10);
    t.expect(std::abs(real_of(mine) - orc.value) <= 1e-6, "series route oracle delta");
  }
  return t.result(8, "independent quadrature oracle agreement", "all within 1e-6");
}

// --- criterion 9: pole prescription surfacing -------------------------------

CheckResult criterion9() {
  Tally t;
  auto f = kernel_of("1/x");
  bool raised = false;
  try {
    integrate_finite_kernel(f, Scalar(-1), Scalar(1), ConstantPolicy::symbolic(), 1e-9);
  } catch (const ConstantError&) {
    raised = true;
  }
  t.expect(raised, "symbolic constant mode did not flag the 1/x ambiguity");
  auto r3 = integrate_finite_kernel(f, Scalar(-1), Scalar(1), ConstantPolicy::prescribed(Scalar(3)),
                                    1e-9);
  auto r7 = integrate_finite_kernel(f, Scalar(-1), Scalar(1), ConstantPolicy::prescribed(Scalar(7)),
                                    1e-9);
  t.expect((r7.value - r3.value) == Scalar(4), "prescribed constants do not shift the value");
  return t.result(9, "pole-prescription ambiguity handling", "symbolic mode errors, prescribed shifts");
}

}  // namespace

std::vector<CheckResult> run_selftest() {
  std::vector<CheckResult> out;
  auto guard = [&](CheckResult (*fn)(), int id, const std::string& name) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      CheckResult r;
      r.id = id;
      r.name = name;
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
      out.push_back(r);
    }
  };
  guard(criterion1, 1, "exact kernel route, worked integral suite");
  guard(criterion2, 2, "series route on [-1,1] and reflection split");
  guard(criterion3, 3, "Laplace transform laws");
  guard(criterion4, 4, "heat-trace spectrum recovery");
  guard(criterion5, 5, "operator-matrix commutator and calculus identity");
  guard(criterion6, 6, "w-route eps independence");
  guard(criterion7, 7, "gaussian vs sinc regularization");
  guard(criterion8, 8, "independent quadrature oracle agreement");
  guard(criterion9, 9, "pole-prescription ambiguity handling");
  return out;
}

}  // namespace opint
