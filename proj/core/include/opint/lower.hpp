#pragma once

#include "opint/expr.hpp"
#include "opint/kernel_integrand.hpp"
#include "opint/laplace.hpp"
#include "opint/power_series.hpp"

namespace opint {

/// Compositional Maclaurin expansion of a (variable-bound, parameter-free)
/// expression to order N.  Throws ClassError with an explanation for
/// constructs with no series at 0 (abs, poles, ...).
PowerSeries lower_series(const Expr& e, int order);

/// Rewrite into the exponential-polynomial kernel class
/// sum c x^p e^{rho x} e^{-gamma x^2}; trig powers expand into complex
/// exponentials.  Throws ClassError when the expression leaves the class
/// (e.g. 1/(1+x^2): use the series route or a split instead).
KernelIntegrand lower_kernel(const Expr& e);

/// Kernel-class expressions that are also sums of x^k e^{ax} (no negative
/// powers, no Gaussian) convert to the Laplace-side ExpPoly type.
ExpPoly to_exp_poly(const KernelIntegrand& f);

/// f(x) -> f(1/x) / x^2, the change of variables for outer interval pieces.
Expr reciprocal_substitute(const Expr& e);

}  // namespace opint
