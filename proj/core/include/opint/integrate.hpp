#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "opint/kernel_expr.hpp"
#include "opint/kernel_integrand.hpp"
#include "opint/operators.hpp"
#include "opint/power_series.hpp"

namespace opint {

enum class Route {
  series_finite,   // f(d)(e^{eps b} - e^{eps a})/eps via Maclaurin coefficients
  kernel_finite,   // same target, kernel-class f
  split_finite,    // piecewise series route
  half_line,       // f(-d) 1/eps at eps -> 0+ (and its reflection)
  delta_exact,     // 2 pi f(-i d) delta(eps), exact atoms
  delta_numeric,   // delta replaced by a regularized family + extrapolation
  w_route,         // 2 pi delta_reg(i d) f(eps), eps-independent
  two_sided,       // (f(d) + f(-d)) 1/eps at eps -> 0+
  fourier_exact,
  fourier_numeric,
};

std::string route_name(Route r);

/// Delta/limit regularization strategy plus extrapolation schedule.
struct RegScheme {
  enum class Shape { gaussian, sinc };
  Shape shape = Shape::gaussian;
  double start = 0.5;    // initial Gaussian width a, or initial sinc cutoff L
  double factor = 0.5;   // geometric schedule ratio (<1 widths, >1 cutoffs)
  int steps = 6;
  enum class Extrapolation { none, richardson };
  Extrapolation extrapolation = Extrapolation::richardson;
  int richardson_depth = 4;

  static RegScheme gaussian(double width = 0.2, int steps = 8, double factor = 0.5);
  static RegScheme sinc(double cutoff = 24.0, int steps = 6, double factor = 2.0);
  void validate() const;
};

struct ConvergenceRow {
  int step = 0;
  double parameter = 0.0;           // order, width or cutoff
  std::complex<double> estimate{};  // accumulated/extrapolated estimate
  double delta_prev = 0.0;
  double bound = 0.0;
};

struct Diagnostics {
  int truncation_order = 0;
  int extrapolation_steps = 0;
  double tail_estimate = 0.0;
  double eps_spread = 0.0;  // w-route: spread of the result over the eps probes
  std::vector<ConvergenceRow> rows;
  std::string notes;
};

struct IntegralResult {
  Scalar value;
  Route route = Route::series_finite;
  Diagnostics diagnostics;
  std::optional<double> oracle_delta;  // filled by callers that cross-check
  bool verified = false;
};

/// Finite interval via the series representation.  Exact (and exactly
/// summed) for exact polynomial input; alternating/slow tails are
/// extrapolated and the tail bound reported.
IntegralResult integrate_finite(const PowerSeries& f, const Scalar& a, const Scalar& b,
                                double tol);

/// The exact partial sums sum_{n<=q} c_n (b^{n+1}-a^{n+1})/(n+1) of the
/// series representation (exact Scalars for exact input).
std::vector<Scalar> finite_series_partial_sums(const PowerSeries& f, const Scalar& a,
                                               const Scalar& b);

/// Finite interval for kernel-class integrands (poles allowed at 0, where
/// the integration-constant policy decides the prescription).
IntegralResult integrate_finite_kernel(const KernelIntegrand& f, const Scalar& a,
                                       const Scalar& b, const ConstantPolicy& policy,
                                       double tol);

struct SeriesPiece {
  PowerSeries f;
  Scalar a, b;
};
/// Sum of prepared pieces (callers perform any change of variables when
/// assembling the pieces).
IntegralResult integrate_finite_split(const std::vector<SeriesPiece>& pieces, double tol);

enum class HalfLineSide { positive, negative };

IntegralResult integrate_half_line(const KernelIntegrand& f, HalfLineSide side,
                                   const ConstantPolicy& policy, double tol);

enum class RealLineRoute { delta, w, two_sided };

IntegralResult integrate_real_line(const KernelIntegrand& f, RealLineRoute route,
                                   const RegScheme& reg, const ConstantPolicy& policy,
                                   double tol, bool force_numeric = false);

/// Series-class integrand over the real line (regularized route only).
IntegralResult integrate_real_line_series(const PowerSeries& f, const RegScheme& reg,
                                          double tol);

struct FourierResult {
  bool symbolic = false;
  Scalar value;          // when !symbolic
  KernelExpr expr;       // when symbolic (plane-wave deltas)
  Diagnostics diagnostics;
};

/// F[f](x) = sqrt(2 pi) f(-i d/dx) delta(x).
FourierResult fourier_transform(const KernelIntegrand& f, const Scalar& x,
                                const RegScheme& reg, bool force_numeric = false);

/// Heat-semigroup action e^{a d^2} on delta/Gaussian atoms (widths add).
KernelExpr delta_semigroup(const Scalar& a, const KernelExpr& g);

/// Applies f(nu d) to a kernel target with a shared antiderivative tower so
/// integration constants cancel the way the worked examples require.
KernelExpr apply_kernel_operator(const KernelIntegrand& f, Nu nu, const KernelExpr& target,
                                 const ConstantPolicy& policy, int& next_symbol);

/// Polynomial extrapolation of (x_k, v_k) to x = 0 with per-step rows.
struct ExtrapolationResult {
  std::complex<double> value;
  double err_estimate = 0.0;
  std::vector<ConvergenceRow> rows;
};
ExtrapolationResult extrapolate_to_zero(const std::vector<double>& xs,
                                        const std::vector<std::complex<double>>& vs,
                                        int depth);

}  // namespace opint
