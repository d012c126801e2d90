#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "opint/integrate.hpp"
#include "opint/laplace.hpp"
#include "opint/lower.hpp"
#include "opint/oracle.hpp"
#include "opint/selftest.hpp"

using json = nlohmann::json;
using namespace opint;

namespace {

std::string dec(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json value_json(const Scalar& v) {
  auto z = v.to_complex();
  return json{{"re", dec(z.real())}, {"im", dec(z.imag())}};
}

json diagnostics_json(const Diagnostics& d) {
  json rows = json::array();
  for (const auto& r : d.rows)
    rows.push_back(json{{"step", r.step},
                        {"parameter", dec(r.parameter)},
                        {"estimate", dec(r.estimate.real())},
                        {"delta_prev", dec(r.delta_prev)},
                        {"bound", dec(r.bound)}});
  return json{{"truncation_order", d.truncation_order},
              {"extrapolation_steps", d.extrapolation_steps},
              {"tail_estimate", dec(d.tail_estimate)},
              {"eps_spread", dec(d.eps_spread)},
              {"rows", rows},
              {"notes", d.notes}};
}

struct OracleComparison {
  double value;
  double delta;
  bool converged;
};

void print_table(const IntegralResult& r, const std::optional<OracleComparison>& oracle) {
  auto z = r.value.to_complex();
  std::printf("value     %s", dec(z.real()).c_str());
  if (z.imag() != 0.0)
    std::printf("  %s%si", z.imag() >= 0 ? "+" : "", dec(z.imag()).c_str());
  std::printf("\n");
  std::printf("route     %s\n", route_name(r.route).c_str());
  std::printf("verified  %s\n", r.verified ? "yes" : "no");
  if (r.diagnostics.truncation_order > 0)
    std::printf("order     %d\n", r.diagnostics.truncation_order);
  if (r.diagnostics.tail_estimate > 0)
    std::printf("bound     %s\n", dec(r.diagnostics.tail_estimate).c_str());
  if (r.diagnostics.eps_spread > 0)
    std::printf("spread    %s\n", dec(r.diagnostics.eps_spread).c_str());
  if (oracle) {
    std::printf("oracle    %s (delta %s)%s\n", dec(oracle->value).c_str(),
                dec(oracle->delta).c_str(), oracle->converged ? "" : " [oracle unconverged]");
  }
  if (!r.diagnostics.notes.empty()) std::printf("notes     %s\n", r.diagnostics.notes.c_str());
  if (!r.diagnostics.rows.empty()) {
    std::printf("%6s %14s %22s %14s %14s\n", "step", "parameter", "estimate", "delta_prev",
                "bound");
    const auto& rows = r.diagnostics.rows;
    size_t shown = 0;
    for (const auto& row : rows) {
      if (rows.size() > 24 && shown++ % (rows.size() / 12) != 0 && &row != &rows.back())
        continue;
      std::printf("%6d %14.6g %22.15g %14.6g %14.6g\n", row.step, row.parameter,
                  row.estimate.real(), row.delta_prev, row.bound);
    }
  }
}

void print_csv(const IntegralResult& r) {
  std::printf("step,parameter,estimate,delta_prev,bound\n");
  for (const auto& row : r.diagnostics.rows)
    std::printf("%d,%s,%s,%s,%s\n", row.step, dec(row.parameter).c_str(),
                dec(row.estimate.real()).c_str(), dec(row.delta_prev).c_str(),
                dec(row.bound).c_str());
}

void print_json(const IntegralResult& r, const std::optional<OracleComparison>& oracle) {
  json out{{"value", value_json(r.value)},
           {"route", route_name(r.route)},
           {"diagnostics", diagnostics_json(r.diagnostics)},
           {"verified", r.verified}};
  if (oracle) {
    out["oracle"] = json{{"value", dec(oracle->value)},
                         {"delta", dec(oracle->delta)},
                         {"converged", oracle->converged}};
  } else {
    out["oracle"] = nullptr;
  }
  std::printf("%s\n", out.dump(2).c_str());
}

struct CommonOpts {
  std::string format = "table";
  double tol = 1e-9;
  int order = 64;
  std::string reg = "gaussian";
  std::string constant = "symbolic";
  std::vector<std::string> params;
  std::string var = "x";
  bool oracle = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  cmd->add_option("--tol", o.tol, "verification tolerance");
  cmd->add_option("--order,-N", o.order, "series truncation order");
  cmd->add_option("--reg", o.reg, "delta regularization shape")
      ->check(CLI::IsMember({"gaussian", "sinc"}));
  cmd->add_option("--constant", o.constant,
                  "integration-constant policy: zero | symbolic | value=c");
  cmd->add_option("--param", o.params, "parameter binding k=v (repeatable)");
  cmd->add_option("--var", o.var, "integration variable symbol");
  cmd->add_flag("--oracle", o.oracle, "cross-check against the quadrature oracle");
}

std::map<std::string, Scalar> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, Scalar> out;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw DomainError("bad --param, expected k=v: " + kv);
    out[kv.substr(0, eq)] = Scalar::parse_exact(kv.substr(eq + 1));
  }
  return out;
}

ConstantPolicy parse_policy(const std::string& text) {
  if (text == "zero") return ConstantPolicy::zero();
  if (text == "symbolic") return ConstantPolicy::symbolic();
  if (text.rfind("value=", 0) == 0)
    return ConstantPolicy::prescribed(Scalar::parse_exact(text.substr(6)));
  throw DomainError("bad --constant: " + text + " (zero | symbolic | value=c)");
}

RegScheme parse_reg(const std::string& shape) {
  return shape == "sinc" ? RegScheme::sinc() : RegScheme::gaussian();
}

Expr prepare(const std::string& text, const CommonOpts& o) {
  Expr e = parse_expression(text);
  e = substitute_params(e, parse_params(o.params));
  e = bind_variable(e, o.var);
  auto leftover = parameter_names(e, o.var);
  if (!leftover.empty())
    throw DomainError("unbound parameter '" + leftover.front() + "' (pass --param " +
                      leftover.front() + "=value)");
  return e;
}

oracle::Integrand oracle_integrand(const Expr& e) {
  return [e](double x) {
    auto v = eval_expression(e, {x, 0.0});
    double re = v.real();
    if (std::isfinite(re)) return re;
    // removable singularity: probe symmetrically around the point
    for (double h = 1e-7; h < 1e-3; h *= 10) {
      auto a = eval_expression(e, {x + h * (1.0 + std::abs(x)), 0.0});
      auto b = eval_expression(e, {x - h * (1.0 + std::abs(x)), 0.0});
      double m = 0.5 * (a.real() + b.real());
      if (std::isfinite(m)) return m;
    }
    return 0.0;
  };
}

double oracle_block_hint(const KernelIntegrand& f) {
  auto freqs = f.frequencies();
  if (freqs.empty()) return 3.14159265358979323846;
  return 2.0 * 3.14159265358979323846 / freqs.front();
}

int finish(const IntegralResult& r, const CommonOpts& o,
           const std::optional<OracleComparison>& oracle) {
  if (o.format == "json")
    print_json(r, oracle);
  else if (o.format == "csv")
    print_csv(r);
  else
    print_table(r, oracle);
  return r.verified ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_integrate(const std::string& text, const CommonOpts& o, const std::string& domain,
                  const std::string& from, const std::string& to, std::string route,
                  bool force_numeric) {
  Expr e = prepare(text, o);
  ConstantPolicy policy = parse_policy(o.constant);
  RegScheme reg = parse_reg(o.reg);
  IntegralResult result;

  auto kernel = [&]() { return lower_kernel(e); };
  auto series = [&]() { return lower_series(e, o.order); };

  if (domain == "finite") {
    Scalar a = Scalar::parse_exact(from), b = Scalar::parse_exact(to);
    if (route == "auto") {
      try {
        result = integrate_finite(series(), a, b, o.tol);
      } catch (const ClassError&) {
        result = integrate_finite_kernel(kernel(), a, b, policy, o.tol);
      }
    } else if (route == "series") {
      result = integrate_finite(series(), a, b, o.tol);
    } else if (route == "kernel") {
      result = integrate_finite_kernel(kernel(), a, b, policy, o.tol);
    } else {
      throw DomainError("route '" + route + "' does not apply to a finite interval");
    }
  } else if (domain == "half+" || domain == "half-") {
    auto side = domain == "half+" ? HalfLineSide::positive : HalfLineSide::negative;
    result = integrate_half_line(kernel(), side, policy, o.tol);
  } else if (domain == "real") {
    if (route == "auto" || route == "delta" || route == "kernel") {
      try {
        result = integrate_real_line(kernel(), RealLineRoute::delta, reg, policy, o.tol,
                                     force_numeric);
      } catch (const ClassError& err) {
        if (route != "auto") throw;
        // Reflection split: int_R f = int_{-1}^{1} [f(x) + f(1/x)/x^2] dx.
        PowerSeries inner = series();
        PowerSeries outer = lower_series(bind_variable(reciprocal_substitute(e), o.var), o.order);
        result = integrate_finite_split(
            {{inner, Scalar(-1), Scalar(1)}, {outer, Scalar(-1), Scalar(1)}}, o.tol);
        result.diagnostics.notes = "kernel route unavailable (" + std::string(err.what()) +
                                   "); used the x -> 1/x reflection split";
      }
    } else if (route == "w") {
      result = integrate_real_line(kernel(), RealLineRoute::w, reg, policy, o.tol);
    } else if (route == "two-sided") {
      result = integrate_real_line(kernel(), RealLineRoute::two_sided, reg, policy, o.tol);
    } else if (route == "series") {
      result = integrate_real_line_series(series(), reg, o.tol);
    } else {
      throw DomainError("unknown route: " + route);
    }
  } else {
    throw DomainError("unknown domain: " + domain);
  }

  std::optional<OracleComparison> cmp;
  if (o.oracle) {
    oracle::QuadResult q;
    auto f = oracle_integrand(e);
    if (domain == "finite") {
      q = oracle::quad_finite(f, Scalar::parse_exact(from).to_double(),
                              Scalar::parse_exact(to).to_double(), std::min(o.tol, 1e-8));
    } else {
      oracle::UnboundedOptions opt;
      opt.tol = std::min(o.tol, 1e-8);
      try {
        opt.block = oracle_block_hint(lower_kernel(e));
      } catch (const Error&) {
        // keep default block
      }
      oracle::Integrand g = f;
      if (domain == "half-") g = [f](double x) { return f(-x); };
      q = oracle::quad_unbounded(g, domain == "real" ? oracle::Domain::real_line
                                                     : oracle::Domain::half_line,
                                 opt);
    }
    double got = result.value.to_complex().real();
    cmp = OracleComparison{q.value, std::abs(got - q.value), q.converged};
    result.oracle_delta = cmp->delta;
  }
  return finish(result, o, cmp);
}

int cmd_fourier(const std::string& text, const CommonOpts& o, const std::string& at) {
  Expr e = prepare(text, o);
  Scalar x = Scalar::parse_exact(at);
  FourierResult r = fourier_transform(lower_kernel(e), x, parse_reg(o.reg));
  if (r.symbolic) {
    if (o.format == "json") {
      json out{{"symbolic", r.expr.str("x")}, {"verified", true}, {"route", "fourier-exact"}};
      std::printf("%s\n", out.dump(2).c_str());
    } else {
      std::printf("symbolic  %s\n", r.expr.str("x").c_str());
    }
    return 0;
  }
  IntegralResult as_result;
  as_result.value = r.value;
  as_result.route = Route::fourier_exact;
  as_result.diagnostics = r.diagnostics;
  as_result.verified = true;
  return finish(as_result, o, std::nullopt);
}

int cmd_laplace(const std::string& text, const CommonOpts& o, const std::string& at) {
  Expr e = prepare(text, o);
  try {
    ExpPoly f = to_exp_poly(lower_kernel(e));
    RationalFunction image = laplace_forward_rational(f);
    if (o.format == "json") {
      json out{{"transform", image.str("x")}, {"verified", true}};
      if (!at.empty()) out["value"] = value_json(laplace_forward_at(f, Scalar::parse_exact(at)));
      std::printf("%s\n", out.dump(2).c_str());
    } else {
      std::printf("transform  %s\n", image.str("x").c_str());
      if (!at.empty()) {
        Scalar v = laplace_forward_at(f, Scalar::parse_exact(at));
        std::printf("value      %s\n", dec(v.to_complex().real()).c_str());
      }
    }
    return 0;
  } catch (const ClassError&) {
    if (at.empty())
      throw DomainError(
          "integrand is outside the exponential-polynomial class; provide --at for the "
          "asymptotic series evaluation");
    PowerSeries s = lower_series(e, o.order);
    auto v = laplace_forward_series_at(s, Scalar::parse_exact(at));
    std::printf("value      %s\n", dec(v.value.to_complex().real()).c_str());
    std::printf("note       asymptotic series (do not sum naively): %d terms, first dropped "
                "%s\n",
                v.terms_used, dec(v.first_dropped).c_str());
    return 1;  // asymptotic values carry no certified bound
  }
}

int cmd_invlaplace(const std::string& text, const CommonOpts& o, const std::string& at) {
  Expr e = prepare(text, o);
  // Lower the expression to a rational function in the variable.
  std::function<RationalFunction(const Expr&)> rat = [&](const Expr& n) -> RationalFunction {
    using K = Expr::Kind;
    switch (n.kind) {
      case K::number:
        return RationalFunction(Polynomial::constant(n.number),
                                Polynomial::constant(Scalar(1)));
      case K::variable:
        return RationalFunction(Polynomial::x(), Polynomial::constant(Scalar(1)));
      case K::add:
        return rat(n.kids[0]) + rat(n.kids[1]);
      case K::sub: {
        auto b = rat(n.kids[1]);
        return rat(n.kids[0]) + RationalFunction(-b.num(), b.den());
      }
      case K::mul: {
        auto a = rat(n.kids[0]), b = rat(n.kids[1]);
        return RationalFunction(a.num() * b.num(), a.den() * b.den());
      }
      case K::div: {
        auto a = rat(n.kids[0]), b = rat(n.kids[1]);
        if (b.num().is_zero()) throw DomainError("division by zero");
        return RationalFunction(a.num() * b.den(), a.den() * b.num());
      }
      case K::neg: {
        auto a = rat(n.kids[0]);
        return RationalFunction(-a.num(), a.den());
      }
      case K::pow: {
        const Expr& expo = n.kids[1];
        Scalar p;
        if (expo.kind == K::number) p = expo.number;
        else if (expo.kind == K::neg && expo.kids[0].kind == K::number) p = -expo.kids[0].number;
        else throw DomainError("rational functions need integer exponents");
        if (!p.is_integer()) throw DomainError("rational functions need integer exponents");
        long k = p.as_integer();
        auto a = rat(n.kids[0]);
        Polynomial num = Polynomial::constant(Scalar(1)), den = num;
        for (long j = 0; j < std::labs(k); ++j) {
          num = num * a.num();
          den = den * a.den();
        }
        return k >= 0 ? RationalFunction(num, den) : RationalFunction(den, num);
      }
      default:
        throw DomainError("not a rational function of " + o.var);
    }
  };
  RationalFunction r = rat(e);
  ExpPoly inv = laplace_inverse_rational(r);
  if (o.format == "json") {
    json out{{"inverse", inv.str("x")}, {"verified", true}};
    if (!at.empty()) out["value"] = value_json(inv.eval(Scalar::parse_exact(at)));
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("%s\n", inv.str("x").c_str());
    if (!at.empty())
      std::printf("value at %s: %s\n", at.c_str(),
                  dec(inv.eval(Scalar::parse_exact(at)).to_complex().real()).c_str());
  }
  return 0;
}

int cmd_spectrum(const std::string& text, const CommonOpts& o, const std::string& render,
                 double width, const std::string& trace_at) {
  // Traces are conventionally written in t; fall back to the requested
  // variable if binding t leaves the expression constant or unbound.
  Expr parsed = parse_expression(text);
  parsed = substitute_params(parsed, parse_params(o.params));
  CommonOpts local = o;
  if (o.var == "x" && !parameter_names(parsed, "").empty()) {
    auto names = parameter_names(parsed, "");
    for (const auto& n : names)
      if (n == "t") local.var = "t";
  }
  Expr e = prepare(text, local);
  ExpPoly trace = to_exp_poly(lower_kernel(e));
  SpectralComb comb = spectrum_recover(trace);
  if (o.format == "json") {
    json lines = json::array();
    for (const auto& l : comb.lines())
      lines.push_back(json{{"rate", dec(l.rate.to_double())},
                           {"weight", dec(l.weight.to_double())}});
    json out{{"lines", lines}, {"verified", true}};
    if (!trace_at.empty())
      out["trace"] = dec(heat_trace(comb, Scalar::parse_exact(trace_at).to_double()));
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("%12s %12s\n", "rate", "weight");
    for (const auto& l : comb.lines())
      std::printf("%12.6g %12.6g\n", l.rate.to_double(), l.weight.to_double());
    if (!trace_at.empty())
      std::printf("trace(%s) = %s\n", trace_at.c_str(),
                  dec(heat_trace(comb, Scalar::parse_exact(trace_at).to_double())).c_str());
  }
  if (!render.empty()) {
    // render lo:hi:n
    double lo, hi;
    int n;
    if (std::sscanf(render.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 2)
      throw DomainError("bad --render, expected lo:hi:n");
    std::vector<double> grid(n);
    for (int k = 0; k < n; ++k) grid[k] = lo + (hi - lo) * k / (n - 1);
    CombRenderScheme reg;
    reg.shape = o.reg == "sinc" ? CombRenderScheme::Shape::sinc
                                : CombRenderScheme::Shape::gaussian;
    reg.width = width;
    auto vals = comb_render(comb, reg, grid);
    std::printf("lambda,density\n");
    for (int k = 0; k < n; ++k)
      std::printf("%s,%s\n", dec(grid[k]).c_str(), dec(vals[k]).c_str());
  }
  return 0;
}

int cmd_ftc_check(const std::string& text, const CommonOpts& o, const std::string& from,
                  const std::string& to) {
  Expr e = prepare(text, o);
  PowerSeries f = lower_series(e, o.order);
  Scalar a = Scalar::parse_exact(from), b = Scalar::parse_exact(to);
  auto lhs = integrate_finite(f.differentiate(), a, b, o.tol);
  Scalar rhs = f.eval(b).value - f.eval(a).value;
  Scalar resid = lhs.value - rhs;
  bool exact = resid.is_exact() && resid.is_zero();
  double mag = resid.abs();
  if (o.format == "json") {
    json out{{"integral_of_derivative", value_json(lhs.value)},
             {"boundary_difference", value_json(rhs)},
             {"residual", dec(mag)},
             {"exact", exact},
             {"verified", exact || mag <= o.tol}};
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("integral of f'   %s\n", dec(lhs.value.to_complex().real()).c_str());
    std::printf("f(b) - f(a)      %s\n", dec(rhs.to_complex().real()).c_str());
    std::printf("residual         %s%s\n", dec(mag).c_str(), exact ? " (exact)" : "");
  }
  return (exact || mag <= o.tol) ? 0 : 1;
}

int cmd_selftest(const std::string& format) {
  auto results = run_selftest();
  bool all = true;
  if (format == "json") {
    json out = json::array();
    for (const auto& r : results) {
      out.push_back(json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
      all = all && r.pass;
    }
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    for (const auto& r : results) {
      std::printf("[%s] %d. %-48s %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.detail.c_str());
      all = all && r.pass;
    }
    std::printf("%s\n", all ? "all checks passed" : "FAILURES present");
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "opint: integrals and integral transforms evaluated by applying differential "
      "operators to elementary kernels, with an independent quadrature oracle"};
  app.require_subcommand(1);

  // integrate
  CommonOpts io;
  std::string i_expr, i_domain = "real", i_from = "0", i_to = "1", i_route = "auto";
  bool i_numeric = false;
  auto* integ = app.add_subcommand("integrate", "evaluate an integral");
  integ->add_option("expr", i_expr, "integrand expression")->required();
  integ->add_option("--domain", i_domain, "finite | half+ | half- | real")
      ->check(CLI::IsMember({"finite", "half+", "half-", "real"}));
  integ->add_option("--from", i_from, "lower endpoint (finite domain)");
  integ->add_option("--to", i_to, "upper endpoint (finite domain)");
  integ->add_option("--route", i_route, "series | kernel | delta | w | two-sided | auto")
      ->check(CLI::IsMember({"auto", "series", "kernel", "delta", "w", "two-sided"}));
  integ->add_flag("--numeric", i_numeric, "skip the exact path, use the regularized route");
  add_common(integ, io);

  // fourier
  CommonOpts fo;
  std::string f_expr, f_at = "0";
  auto* four = app.add_subcommand("fourier", "Fourier transform at a point (or symbolic)");
  four->add_option("expr", f_expr)->required();
  four->add_option("--at", f_at, "evaluation point x");
  add_common(four, fo);

  // laplace
  CommonOpts lo;
  std::string l_expr, l_at;
  auto* lap = app.add_subcommand("laplace", "forward Laplace transform");
  lap->add_option("expr", l_expr)->required();
  lap->add_option("--at", l_at, "numeric evaluation point x > 0");
  add_common(lap, lo);

  // invlaplace
  CommonOpts vo;
  std::string v_expr, v_at;
  auto* inv = app.add_subcommand("invlaplace", "inverse Laplace transform of a rational function");
  inv->add_option("expr", v_expr)->required();
  inv->add_option("--at", v_at, "numeric evaluation point");
  add_common(inv, vo);

  // spectrum
  CommonOpts so;
  std::string s_expr, s_render, s_trace_at;
  double s_width = 0.01;
  auto* spec = app.add_subcommand("spectrum", "recover a spectral comb from a heat trace");
  spec->add_option("expr", s_expr, "trace as a sum of decaying exponentials in t")->required();
  spec->add_option("--render", s_render, "render the regularized comb on lo:hi:n");
  spec->add_option("--width", s_width, "regularization width for --render");
  spec->add_option("--trace-at", s_trace_at, "evaluate the trace at t");
  add_common(spec, so);

  // ftc-check
  CommonOpts co;
  std::string c_expr, c_from = "-1", c_to = "1";
  auto* ftc = app.add_subcommand("ftc-check", "compare the integral of f' with f(b)-f(a)");
  ftc->add_option("expr", c_expr)->required();
  ftc->add_option("--from", c_from);
  ftc->add_option("--to", c_to);
  add_common(ftc, co);

  // selftest
  std::string t_format = "table";
  auto* self = app.add_subcommand("selftest", "run the full verification matrix");
  self->add_option("--format", t_format)->check(CLI::IsMember({"table", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (integ->parsed()) return cmd_integrate(i_expr, io, i_domain, i_from, i_to, i_route, i_numeric);
    if (four->parsed()) return cmd_fourier(f_expr, fo, f_at);
    if (lap->parsed()) return cmd_laplace(l_expr, lo, l_at);
    if (inv->parsed()) return cmd_invlaplace(v_expr, vo, v_at);
    if (spec->parsed()) return cmd_spectrum(s_expr, so, s_render, s_width, s_trace_at);
    if (ftc->parsed()) return cmd_ftc_check(c_expr, co, c_from, c_to);
    if (self->parsed()) return cmd_selftest(t_format);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
