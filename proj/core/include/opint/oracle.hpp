#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace opint::oracle {

// Ground-truth quadrature and special-function evaluation.  This namespace
// must not touch the operator/series engines: its results are used to
// cross-check them.

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (G7,K15) with recursive bisection.
QuadResult quad_finite(const Integrand& f, double a, double b, double tol);

enum class Domain { half_line, real_line };

struct UnboundedOptions {
  double tol = 1e-10;
  double core_halfwidth = 40.0;  // |x| handled by direct adaptive quadrature
  double block = 3.14159265358979323846;  // tail partial-sum block length
  int blocks = 96;
};

/// Improper integrals: direct quadrature on a finite core plus block
/// partial sums with sequence extrapolation on the oscillatory tails.
QuadResult quad_unbounded(const Integrand& f, Domain domain, double tol);
QuadResult quad_unbounded(const Integrand& f, Domain domain, const UnboundedOptions& opt);

enum class SpecialFn { Ei, erf, log, gamma };

/// Principal-branch special function evaluation.
std::complex<double> special_eval(SpecialFn fn, std::complex<double> z);

double ei(double x);
double e1(double x);
/// Sine integral Si(x) = ∫_0^x sin t / t dt.
double si(double x);

}  // namespace opint::oracle
