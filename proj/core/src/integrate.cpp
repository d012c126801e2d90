#include "opint/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace opint {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

using Cplx = std::complex<double>;

// Internal adaptive Simpson for the regularized/window integrals.  Kept
// deliberately separate from the oracle's Gauss-Kronrod code path.
Cplx simpson_rec(const std::function<Cplx(double)>& f, double a, double b, Cplx fa, Cplx fm,
                 Cplx fb, Cplx whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  Cplx flm = f(lm), frm = f(rm);
  Cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  Cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  Cplx delta = left + right - whole;
  if (depth >= 28 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth + 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth + 1);
}

// `feature` bounds the seed panel width so narrow or oscillatory structure
// cannot be missed by the first probes.
Cplx simpson(const std::function<Cplx(double)>& f, double a, double b, double tol,
             double feature = 1.0) {
  if (a == b) return 0.0;
  int panels = static_cast<int>(std::ceil((b - a) / std::max(feature, 1e-6)));
  panels = std::clamp(panels, 16, 40000);
  Cplx acc = 0.0;
  double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    double x0 = a + k * h, x1 = x0 + h;
    Cplx f0 = f(x0), fmid = f(0.5 * (x0 + x1)), f1 = f(x1);
    Cplx whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fmid + f1);
    acc += simpson_rec(f, x0, x1, f0, fmid, f1, whole, tol / panels, 0);
  }
  return acc;
}

double feature_scale(const KernelIntegrand& f) {
  double w = 0.0;
  for (double v : f.frequencies()) w = std::max(w, v);
  double width = w > 0 ? kPi / (2.0 * w) : 1.0;
  return std::min(width, 1.0);
}

void monitor_divergence(const std::vector<Cplx>& values) {
  if (values.size() < 3) return;
  double first = std::abs(values.front());
  bool growing = true;        // steady geometric growth, no deceleration
  for (size_t k = 1; k < values.size(); ++k)
    if (std::abs(values[k]) < 1.1 * std::abs(values[k - 1])) growing = false;
  double last = std::abs(values.back());
  if (growing && (last > 1e6 * (first + 1.0) || last >= 4.0 * (first + 1e-30)))
    throw DivergenceError("regularized estimates grow without bound: integral diverges");
}

// Pick between the raw last schedule value and the Richardson extrapolant by
// their internal error estimates: schedules converging faster than any
// power law (erf-type tails) are best taken raw, power-law ones improve
// under extrapolation.
void finish_schedule(const std::vector<double>& params, const std::vector<Cplx>& values,
                     const RegScheme& reg, double tol, IntegralResult& res) {
  int max_depth = 1;
  if (reg.extrapolation == RegScheme::Extrapolation::richardson) {
    max_depth = reg.richardson_depth;
    // The Gaussian schedule extrapolates in sqrt(width): two elimination
    // levels there correspond to one width power.
    if (reg.shape == RegScheme::Shape::gaussian) max_depth *= 2;
  }
  // Window selection: early nodes may carry components no polynomial model
  // fits (erf-type tails); the window with the most consistent extrapolant
  // wins.  The raw last value competes too.
  Cplx value = values.back();
  double err = values.size() >= 2
                   ? std::abs(values.back() - values[values.size() - 2])
                   : std::numeric_limits<double>::infinity();
  ExtrapolationResult full = extrapolate_to_zero(params, values, max_depth);
  for (int depth = 2; depth <= max_depth; depth += 2) {
    auto ex = extrapolate_to_zero(params, values, depth);
    if (ex.err_estimate < err) {
      err = ex.err_estimate;
      value = ex.value;
    }
  }
  res.value = Scalar::complex(value);
  res.diagnostics.rows = full.rows;
  res.diagnostics.extrapolation_steps = static_cast<int>(params.size());
  res.diagnostics.tail_estimate = err;
  res.verified = err <= tol;
  for (auto& row : res.diagnostics.rows) row.bound = err;
}

}  // namespace

std::string route_name(Route r) {
  switch (r) {
    case Route::series_finite: return "series";
    case Route::kernel_finite: return "kernel-finite";
    case Route::split_finite: return "series-split";
    case Route::half_line: return "half-line";
    case Route::delta_exact: return "delta-exact";
    case Route::delta_numeric: return "delta-numeric";
    case Route::w_route: return "w-route";
    case Route::two_sided: return "two-sided";
    case Route::fourier_exact: return "fourier-exact";
    case Route::fourier_numeric: return "fourier-numeric";
  }
  return "?";
}

RegScheme RegScheme::gaussian(double width, int steps, double factor) {
  RegScheme r;
  r.shape = Shape::gaussian;
  r.start = width;
  r.steps = steps;
  r.factor = factor;
  r.validate();
  return r;
}

RegScheme RegScheme::sinc(double cutoff, int steps, double factor) {
  RegScheme r;
  r.shape = Shape::sinc;
  r.start = cutoff;
  r.steps = steps;
  r.factor = factor;
  r.validate();
  return r;
}

void RegScheme::validate() const {
  if (!(start > 0)) throw DomainError("regularization parameter must be positive");
  if (steps < 2) throw DomainError("schedule needs at least two steps");
  if (shape == Shape::gaussian && !(factor > 0 && factor < 1))
    throw DomainError("gaussian width schedule must strictly decrease");
  if (shape == Shape::sinc && !(factor > 1))
    throw DomainError("sinc cutoff schedule must strictly increase");
}

ExtrapolationResult extrapolate_to_zero(const std::vector<double>& xs,
                                        const std::vector<Cplx>& vs, int depth) {
  if (xs.size() != vs.size() || xs.empty()) throw DomainError("bad extrapolation input");
  ExtrapolationResult out;
  size_t n = xs.size();
  size_t use = depth > 0 ? std::min(n, static_cast<size_t>(depth) + 1) : n;
  // Diagnostics report the raw schedule (column 0 of the Richardson table);
  // the extrapolated value and its consistency estimate follow below.
  for (size_t k = 0; k < n; ++k) {
    ConvergenceRow row;
    row.step = static_cast<int>(k);
    row.parameter = xs[k];
    row.estimate = vs[k];
    row.delta_prev = k == 0 ? 0.0 : std::abs(vs[k] - vs[k - 1]);
    out.rows.push_back(row);
  }
  // Final value: restrict to the last `use` nodes for stability.
  {
    std::vector<Cplx> t(vs.end() - use, vs.end());
    std::vector<double> x(xs.end() - use, xs.end());
    Cplx prev = t.back();
    for (size_t level = 1; level < t.size(); ++level) {
      for (size_t k = 0; k + level < t.size(); ++k) {
        double xa = x[k], xb = x[k + level];
        t[k] = t[k + 1] + (t[k] - t[k + 1]) * (0.0 - xb) / (xa - xb);
      }
      out.err_estimate = std::abs(t[0] - prev);
      prev = t[0];
    }
    out.value = t[0];
    if (use == 1) {
      out.value = vs.back();
      out.err_estimate = std::numeric_limits<double>::infinity();
    }
  }
  for (auto& row : out.rows) row.bound = out.err_estimate;
  return out;
}

KernelExpr apply_kernel_operator(const KernelIntegrand& f, Nu nu, const KernelExpr& target,
                                 const ConstantPolicy& policy, int& next_symbol) {
  Scalar nuv = nu_value(nu);
  Scalar nu2 = nuv * nuv;

  struct Group {
    Scalar gamma;
    std::vector<KernelExpr> tower;   // tower[k] = k-fold antiderivative
    std::vector<KernelExpr> derivs;  // derivs[k] = k-fold derivative
  };
  std::vector<Group> groups;

  auto group_for = [&](const Scalar& g) -> Group& {
    for (auto& gr : groups)
      if (gr.gamma == g) return gr;
    Group gr;
    gr.gamma = g;
    KernelExpr base = target;
    if (!g.is_zero()) {
      Scalar param = -(g * nu2);
      try {
        base = target.heat_semigroup(param);
      } catch (const DomainError&) {
        throw ClassError("Gaussian decay factor unsupported on this route");
      }
    }
    gr.tower.push_back(base);
    gr.derivs.push_back(base);
    groups.push_back(std::move(gr));
    return groups.back();
  };

  KernelExpr out;
  for (const KernelTerm& t : f.terms()) {
    Group& gr = group_for(t.gauss);
    int p = t.xpow;
    KernelExpr stage;
    if (p >= 0) {
      while (static_cast<int>(gr.derivs.size()) <= p)
        gr.derivs.push_back(gr.derivs.back().differentiate());
      stage = gr.derivs[p];
    } else {
      while (static_cast<int>(gr.tower.size()) <= -p)
        gr.tower.push_back(gr.tower.back().antiderivative(policy, next_symbol));
      stage = gr.tower[-p];
    }
    stage = stage.shift_by(t.rate * nuv);
    out = out + stage.scale(t.coef * nuv.pow(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite interval, series representation
// ---------------------------------------------------------------------------

std::vector<Scalar> finite_series_partial_sums(const PowerSeries& f, const Scalar& a,
                                               const Scalar& b) {
  std::vector<Scalar> sums;
  sums.reserve(f.order() + 1);
  Scalar acc(0);
  Scalar pa = a, pb = b;  // a^{n+1}, b^{n+1}
  for (int n = 0; n <= f.order(); ++n) {
    acc += f.coeff(n) * (pb - pa) / Scalar(n + 1);
    sums.push_back(acc);
    pa *= a;
    pb *= b;
  }
  return sums;
}

IntegralResult integrate_finite(const PowerSeries& f, const Scalar& a, const Scalar& b,
                                double tol) {
  IntegralResult res;
  res.route = Route::series_finite;
  res.diagnostics.truncation_order = f.order();

  if (a == b) {
    res.value = Scalar(0);
    res.verified = true;
    return res;
  }
  if (!a.is_real() || !b.is_real()) throw DomainError("finite interval must be real");

  // An exact polynomial handed over as a series with slack order has a
  // terminating sum: the disc estimate does not constrain it.
  bool polynomial_like = f.is_exact() && f.last_nonzero() + 4 <= f.order();

  double reach = std::max(a.abs(), b.abs());
  double radius = f.radius_estimate();
  if (!polynomial_like && reach > radius * (1.0 + 1e-12))
    throw DomainError(
        "interval exits the estimated convergence disc (radius ~ " + std::to_string(radius) +
        "); split the integral, e.g. map the outer piece with x -> 1/x");

  auto sums = finite_series_partial_sums(f, a, b);
  int N = f.order();

  // Term magnitudes for the tail heuristic.
  std::vector<double> tmag(N + 1, 0.0);
  for (int n = 0; n <= N; ++n) {
    Scalar t = n == 0 ? sums[0] : sums[n] - sums[n - 1];
    tmag[n] = t.abs();
  }

  for (int n = 0; n <= N; ++n) {
    ConvergenceRow row;
    row.step = n;
    row.parameter = n;
    row.estimate = sums[n].to_complex();
    row.delta_prev = tmag[n];
    res.diagnostics.rows.push_back(row);
  }

  if (polynomial_like) {
    // Terminating sum: exact, no disc constraint applies.
    res.value = sums[N];
    res.diagnostics.tail_estimate = 0.0;
    res.verified = true;
    for (auto& row : res.diagnostics.rows) row.bound = 0.0;
    return res;
  }

  // Geometric tail bound from the top terms.
  double tail = std::numeric_limits<double>::infinity();
  if (tmag[N] == 0.0 && tmag[N - 1] == 0.0) {
    tail = 0.0;
  } else {
    int hi = N;
    while (hi > 0 && tmag[hi] == 0.0) --hi;
    int lo = hi - 1;
    while (lo > 0 && tmag[lo] == 0.0) --lo;
    if (lo >= 0 && tmag[lo] > 0.0) {
      double r = std::pow(tmag[hi] / tmag[lo], 1.0 / (hi - lo));
      if (r < 1.0) tail = tmag[hi] * r / (1.0 - r);
    }
  }
  res.diagnostics.tail_estimate = tail;

  if (tail <= tol) {
    res.value = sums[N];
    res.verified = true;
    for (auto& row : res.diagnostics.rows) row.bound = tail;
    return res;
  }

  // Slowly converging (typically alternating boundary case): iterated
  // averaging of the partial sums.
  std::vector<Cplx> seq;
  for (const auto& s : sums) seq.push_back(s.to_complex());
  Cplx prev = seq.back();
  double err = std::numeric_limits<double>::infinity();
  int depth = 0;
  while (seq.size() > 2 && depth < 64) {
    std::vector<Cplx> next(seq.size() - 1);
    for (size_t k = 0; k + 1 < seq.size(); ++k) next[k] = 0.5 * (seq[k] + seq[k + 1]);
    seq = std::move(next);
    double change = std::abs(seq.back() - prev);
    prev = seq.back();
    if (change < err) err = change;
    ++depth;
    if (err < 1e-17) break;
  }
  res.diagnostics.extrapolation_steps = depth;
  err = 8.0 * err;  // last-level change, padded
  res.diagnostics.tail_estimate = err;
  res.value = Scalar::complex(prev);
  res.verified = err <= tol;
  for (auto& row : res.diagnostics.rows) row.bound = err;
  if (!res.verified && !std::isfinite(tail) && !std::isfinite(err))
    throw ConvergenceError("no tail bound available at the requested tolerance");
  return res;
}

IntegralResult integrate_finite_kernel(const KernelIntegrand& f, const Scalar& a,
                                       const Scalar& b, const ConstantPolicy& policy,
                                       double tol) {
  (void)tol;
  if (!a.is_real() || !b.is_real()) throw DomainError("finite interval must be real");
  IntegralResult res;
  res.route = Route::kernel_finite;
  if (a == b) {
    res.value = Scalar(0);
    res.verified = true;
    return res;
  }
  if (f.has_gaussian())
    throw ClassError("Gaussian decay factor unsupported on the finite kernel route");
  KernelExpr target = KernelExpr::exp_poly(b, -1) - KernelExpr::exp_poly(a, -1);
  int sym = 0;
  KernelExpr applied = apply_kernel_operator(f, Nu::plus_one, target, policy, sym);
  res.value = applied.limit_at_zero(KernelExpr::Side::none);
  res.verified = true;
  res.diagnostics.notes = "exact kernel evaluation of the finite-interval representation";
  return res;
}

IntegralResult integrate_finite_split(const std::vector<SeriesPiece>& pieces, double tol) {
  if (pieces.empty()) throw DomainError("no pieces to integrate");
  IntegralResult total;
  total.route = Route::split_finite;
  total.value = Scalar(0);
  total.verified = true;
  int step = 0;
  for (const auto& p : pieces) {
    IntegralResult r = integrate_finite(p.f, p.a, p.b, tol / pieces.size());
    total.value += r.value;
    total.verified = total.verified && r.verified;
    total.diagnostics.tail_estimate += r.diagnostics.tail_estimate;
    total.diagnostics.truncation_order =
        std::max(total.diagnostics.truncation_order, r.diagnostics.truncation_order);
    total.diagnostics.extrapolation_steps += r.diagnostics.extrapolation_steps;
    ConvergenceRow row;
    row.step = step++;
    row.parameter = step;
    row.estimate = total.value.to_complex();
    row.delta_prev = r.value.abs();
    row.bound = r.diagnostics.tail_estimate;
    total.diagnostics.rows.push_back(row);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Half line
// ---------------------------------------------------------------------------

IntegralResult integrate_half_line(const KernelIntegrand& f, HalfLineSide side,
                                   const ConstantPolicy& policy, double tol) {
  (void)tol;
  KernelIntegrand g = side == HalfLineSide::positive ? f : f.reflect();
  if (g.has_gaussian())
    throw ClassError("Gaussian decay factor unsupported on the half-line route");

  bool abel_only = false;
  for (const auto& t : g.terms()) {
    double re = t.rate.to_complex().real();
    if (re > 1e-13) throw DivergenceError("integrand grows at infinity");
    if (t.xpow >= 0 && std::abs(re) <= 1e-13) abel_only = true;
  }

  IntegralResult res;
  res.route = Route::half_line;
  int sym = 0;
  KernelExpr applied =
      apply_kernel_operator(g, Nu::minus_one, KernelExpr::recip(), policy, sym);
  res.value = applied.limit_at_zero(KernelExpr::Side::plus);
  res.verified = !abel_only;
  res.diagnostics.notes = abel_only
      ? "integrand has no decay at infinity: value is the Abel-regularized limit"
      : "exact kernel evaluation of the half-line representation";
  return res;
}

// ---------------------------------------------------------------------------
// Real line
// ---------------------------------------------------------------------------

namespace {

IntegralResult delta_exact_impl(const KernelIntegrand& f, const ConstantPolicy& policy) {
  IntegralResult res;
  res.route = Route::delta_exact;
  int sym = 0;
  KernelExpr applied =
      apply_kernel_operator(f, Nu::minus_i, KernelExpr::delta(), policy, sym);
  Scalar v = applied.limit_at_zero(KernelExpr::Side::none);
  res.value = v * Scalar::real(kTwoPi);
  res.verified = true;
  res.diagnostics.notes = "exact delta-route evaluation";
  return res;
}

std::vector<double> sinc_cutoffs(const KernelIntegrand& f, const RegScheme& reg,
                                 std::string& note) {
  std::vector<double> cutoffs;
  auto freqs = f.frequencies();
  double g = 0.0;
  if (!freqs.empty()) {
    for (int d : {1, 3, 5, 7, 9}) {
      double cand = freqs.front() / d;
      bool ok = true;
      for (double w : freqs) {
        double q = w / cand;
        long qi = std::lround(q);
        if (qi % 2 == 0 || std::abs(q - qi) > 1e-9) {
          ok = false;
          break;
        }
      }
      if (ok) {
        g = cand;
        break;
      }
    }
  }
  double L = reg.start;
  long prev_m = -1;
  for (int k = 0; k < reg.steps; ++k, L *= reg.factor) {
    if (g > 0.0) {
      // Cutoffs at L = (m + 1/2) pi / g with even m: every cos(omega L)
      // vanishes and the sin(omega L) residual keeps a fixed sign, which
      // leaves a clean power series in 1/L for the extrapolation.
      long m = std::lround(L * g / kPi - 0.5);
      if (m % 2 != 0) ++m;
      if (m <= prev_m) m = prev_m + 2;
      prev_m = m;
      cutoffs.push_back((static_cast<double>(m) + 0.5) * kPi / g);
    } else {
      cutoffs.push_back(L);
    }
  }
  if (g > 0.0)
    note = "sinc cutoffs aligned to the oscillation frequencies";
  else if (!freqs.empty())
    note = "sinc cutoffs unaligned (incommensurate frequencies)";
  return cutoffs;
}

IntegralResult delta_numeric_impl(const KernelIntegrand& f, const RegScheme& reg,
                                  const ConstantPolicy& policy, double tol) {
  reg.validate();
  IntegralResult res;
  res.route = Route::delta_numeric;

  std::vector<double> params;
  std::vector<Cplx> values;

  if (reg.shape == RegScheme::Shape::gaussian) {
    double w = reg.start;
    for (int k = 0; k < reg.steps; ++k, w *= reg.factor) {
      int sym = 0;
      KernelExpr applied = apply_kernel_operator(
          f, Nu::minus_i, KernelExpr::gaussian_delta(Scalar::real(w)), policy, sym);
      Scalar v = applied.eval_at(Scalar(0)) * Scalar::real(kTwoPi);
      // Extrapolate in sqrt(w): Gaussian values at their center contribute
      // half-integer powers of the width.
      params.push_back(std::sqrt(w));
      values.push_back(v.to_complex());
      monitor_divergence(values);
    }
    res.diagnostics.notes = "gaussian-regularized delta route";
  } else {
    std::string note;
    auto cutoffs = sinc_cutoffs(f, reg, note);
    bool atoms_ok = true;
    for (double L : cutoffs) {
      Cplx v;
      if (atoms_ok) {
        try {
          int sym = 0;
          KernelExpr applied = apply_kernel_operator(
              f, Nu::minus_i, KernelExpr::sinc_delta(Scalar::real(L)), policy, sym);
          v = (applied.eval_at(Scalar(0)) * Scalar::real(kTwoPi)).to_complex();
        } catch (const ClassError&) {
          atoms_ok = false;
        }
      }
      if (!atoms_ok) {
        // Cutoff interpretation: 2 pi f(-i d) delta_L(eps)|_0 = int_{-L}^{L} f.
        v = simpson([&f](double x) { return f.eval(x); }, -L, L, 1e-12, feature_scale(f));
      }
      params.push_back(1.0 / L);
      values.push_back(v);
      monitor_divergence(values);
    }
    res.diagnostics.notes =
        (atoms_ok ? "sinc-regularized delta route (symbolic atoms); "
                  : "sinc-regularized delta route (cutoff integrals); ") + note;
  }

  finish_schedule(params, values, reg, tol, res);
  return res;
}

IntegralResult w_route_impl(const KernelIntegrand& f, const RegScheme& reg, double tol) {
  IntegralResult res;
  res.route = Route::w_route;

  if (!f.local_series(8))
    throw ClassError("w-route requires an integrand finite on the real line");

  RegScheme sched = reg;
  if (sched.shape != RegScheme::Shape::gaussian) sched = RegScheme::gaussian();
  // Window widths, not delta widths: keep the momentum-space window well
  // inside the integrand's band so the residual is polynomial in w.  The
  // integration radius grows like 1/sqrt(w), so the schedule stays short.
  sched.start = std::min(sched.start, 0.02);
  sched.steps = std::min(sched.steps, 6);
  sched.validate();

  const std::vector<double> eps_probes = {-0.5, 0.0, 0.3, 1.0};
  std::vector<Cplx> per_eps;
  std::string note = "w-route window averages at eps in {-0.5, 0, 0.3, 1}";

  double feature = feature_scale(f);
  for (double eps : eps_probes) {
    std::vector<double> params;
    std::vector<Cplx> values;
    double w = sched.start;
    for (int k = 0; k < sched.steps; ++k, w *= sched.factor) {
      double radius = std::sqrt(38.0 / w);
      auto win = [&](double y) -> Cplx {
        double d = y - eps;
        return std::exp(-w * d * d) * f.eval(y);
      };
      Cplx v = simpson(win, eps - radius, eps + radius, 1e-12, feature);
      // half-integer powers of w appear for integrands with 1/x^2 tails
      params.push_back(std::sqrt(w));
      values.push_back(v);
      monitor_divergence(values);
    }
    auto ex = extrapolate_to_zero(params, values, 2 * sched.richardson_depth);
    per_eps.push_back(ex.value);
    if (eps == eps_probes.back()) {
      res.diagnostics.rows = ex.rows;
      res.diagnostics.tail_estimate = ex.err_estimate;
    }
  }

  double spread = 0.0;
  Cplx mean = 0.0;
  for (const Cplx& v : per_eps) mean += v;
  mean /= static_cast<double>(per_eps.size());
  for (const Cplx& v : per_eps)
    for (const Cplx& u : per_eps) spread = std::max(spread, std::abs(v - u));
  if (spread > tol)
    throw DivergenceError("w-route results vary with eps beyond tolerance (spread " +
                          std::to_string(spread) + ")");
  res.value = Scalar::complex(mean);
  res.verified = true;
  res.diagnostics.eps_spread = spread;
  res.diagnostics.notes = note + "; spread " + std::to_string(spread);
  res.diagnostics.extrapolation_steps = sched.steps;
  return res;
}

}  // namespace

IntegralResult integrate_real_line(const KernelIntegrand& f, RealLineRoute route,
                                   const RegScheme& reg, const ConstantPolicy& policy,
                                   double tol, bool force_numeric) {
  switch (route) {
    case RealLineRoute::delta: {
      if (!force_numeric) {
        try {
          return delta_exact_impl(f, policy);
        } catch (const ClassError&) {
          // fall through to the regularized route
        }
      }
      return delta_numeric_impl(f, reg, policy, tol);
    }
    case RealLineRoute::w:
      return w_route_impl(f, reg, tol);
    case RealLineRoute::two_sided: {
      IntegralResult pos = integrate_half_line(f, HalfLineSide::positive, policy, tol);
      IntegralResult neg = integrate_half_line(f, HalfLineSide::negative, policy, tol);
      IntegralResult res;
      res.route = Route::two_sided;
      res.value = pos.value + neg.value;
      res.verified = pos.verified && neg.verified;
      res.diagnostics.notes = "sum of the two half-line representations";
      return res;
    }
  }
  throw DomainError("bad real-line route");
}

IntegralResult integrate_real_line_series(const PowerSeries& f, const RegScheme& reg,
                                          double tol) {
  reg.validate();
  IntegralResult res;
  res.route = Route::delta_numeric;
  std::vector<double> params;
  std::vector<Cplx> values;

  if (reg.shape == RegScheme::Shape::gaussian) {
    // 2 pi f(-i d) delta_w(0) = (1/sqrt(4 pi w)) sum_q c_{2q} (2q)!/(q! (4w)^q) * 2 pi
    double w = reg.start;
    for (int k = 0; k < reg.steps; ++k, w *= reg.factor) {
      double sum = 0.0;
      double biggest = 0.0, lastmag = 0.0;
      bool decayed = true;
      mpz_class fact2q(1), factq(1);
      for (int q = 0; 2 * q <= f.order(); ++q) {
        if (q > 0) {
          fact2q *= (2 * q - 1) * (2 * q);
          factq *= q;
        }
        Scalar c = f.coeff(2 * q);
        if (c.is_zero()) continue;
        double term = c.to_double() * mpq_class(fact2q, factq).get_d() /
                      std::pow(4.0 * w, q);
        sum += term;
        lastmag = std::abs(term);
        biggest = std::max(biggest, lastmag);
      }
      if (lastmag > 1e-12 * (biggest + 1.0)) decayed = false;
      if (!decayed) continue;  // width too small for this truncation order
      params.push_back(std::sqrt(w));
      values.push_back(kTwoPi * sum / std::sqrt(4.0 * kPi * w));
      monitor_divergence(values);
    }
    res.diagnostics.notes = "gaussian-regularized series route";
  } else {
    double radius = f.radius_estimate();
    double L = reg.start;
    for (int k = 0; k < reg.steps; ++k, L *= reg.factor) {
      if (L > radius) continue;
      // int_{-L}^{L} f = 2 sum_q c_{2q} L^{2q+1}/(2q+1)
      // (odd coefficients integrate to zero over the symmetric cutoff)
      double sum = 0.0, biggest = 0.0, lastmag = 0.0;
      for (int q = 0; 2 * q <= f.order(); ++q) {
        Scalar c = f.coeff(2 * q);
        if (c.is_zero()) continue;
        double term = c.to_double() * std::pow(L, 2 * q + 1) / (2 * q + 1);
        sum += term;
        lastmag = std::abs(term);
        biggest = std::max(biggest, lastmag);
      }
      if (lastmag > 1e-12 * (biggest + 1.0)) continue;  // order too low for this cutoff
      params.push_back(1.0 / L);
      values.push_back(2.0 * sum);
      monitor_divergence(values);
    }
    res.diagnostics.notes = "sinc(cutoff)-regularized series route";
  }
  if (params.size() < 3)
    throw ConvergenceError(
        "truncation order insufficient for the requested regularization schedule");
  finish_schedule(params, values, reg, tol, res);
  res.diagnostics.truncation_order = f.order();
  return res;
}

FourierResult fourier_transform(const KernelIntegrand& f, const Scalar& x,
                                const RegScheme& reg, bool force_numeric) {
  const Scalar root_two_pi = Scalar::real(std::sqrt(kTwoPi));
  FourierResult out;
  if (!force_numeric) {
    try {
      int sym = 0;
      KernelExpr applied = apply_kernel_operator(f, Nu::minus_i, KernelExpr::delta(),
                                                 ConstantPolicy::symbolic(), sym);
      applied = applied.scale(root_two_pi);
      bool has_delta = false;
      for (const auto& a : applied.atoms())
        if (a.base == KernelExpr::Base::delta) has_delta = true;
      if (has_delta) {
        out.symbolic = true;
        out.expr = applied;
        out.diagnostics.notes = "symbolic result (plane-wave components map to deltas)";
        return out;
      }
      out.value = applied.eval_at(x);
      out.diagnostics.notes = "exact kernel evaluation";
      return out;
    } catch (const ClassError&) {
      // fall through
    }
  }
  RegScheme sched = reg;
  if (sched.shape != RegScheme::Shape::gaussian) sched = RegScheme::gaussian();
  sched.validate();
  std::vector<double> params;
  std::vector<Cplx> values;
  double w = sched.start;
  for (int k = 0; k < sched.steps; ++k, w *= sched.factor) {
    int sym = 0;
    KernelExpr applied = apply_kernel_operator(
        f, Nu::minus_i, KernelExpr::gaussian_delta(Scalar::real(w)),
        ConstantPolicy::symbolic(), sym);
    values.push_back((applied.eval_at(x) * root_two_pi).to_complex());
    params.push_back(w);
    monitor_divergence(values);
  }
  auto ex = extrapolate_to_zero(params, values, sched.richardson_depth);
  out.value = Scalar::complex(ex.value);
  out.diagnostics.rows = ex.rows;
  out.diagnostics.tail_estimate = ex.err_estimate;
  out.diagnostics.notes = "gaussian-regularized evaluation";
  return out;
}

KernelExpr delta_semigroup(const Scalar& a, const KernelExpr& g) {
  return g.heat_semigroup(a);
}

}  // namespace opint
