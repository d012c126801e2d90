#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "opint/power_series.hpp"
#include "opint/scalar.hpp"

namespace opint {

/// Integrand in the exponential-polynomial kernel class:
///
///     f(x) = sum_k  coef_k * x^{xpow_k} * e^{rate_k x} * e^{-gauss_k x^2}
///
/// with integer xpow (negative powers allowed), complex rates and
/// nonnegative real Gaussian decay.  This is the class on which the
/// operator substitution x -> nu * d/d eps acts in closed form.
struct KernelTerm {
  Scalar coef;
  int xpow = 0;
  Scalar rate;   // complex; purely imaginary i*omega for oscillatory parts
  Scalar gauss;  // gamma >= 0, real
};

class KernelIntegrand {
 public:
  KernelIntegrand() = default;
  explicit KernelIntegrand(std::vector<KernelTerm> terms) : terms_(std::move(terms)) {
    merge();
  }

  static KernelIntegrand constant(const Scalar& v) {
    return KernelIntegrand({KernelTerm{v, 0, Scalar(0), Scalar(0)}});
  }

  const std::vector<KernelTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  friend KernelIntegrand operator+(const KernelIntegrand& a, const KernelIntegrand& b);
  friend KernelIntegrand operator*(const KernelIntegrand& a, const KernelIntegrand& b);
  KernelIntegrand scale(const Scalar& s) const;
  /// x -> -x
  KernelIntegrand reflect() const;

  /// Pointwise value; near x = 0 negative powers are resolved through a
  /// local series (they must cancel for the integrand to be finite there).
  std::complex<double> eval(double x) const;

  /// Maclaurin expansion; nullopt when the principal part does not cancel
  /// (the integrand has a genuine pole at 0).
  std::optional<PowerSeries> local_series(int order) const;

  /// Distinct nonzero |Im rate| values (oscillation frequencies).
  std::vector<double> frequencies() const;
  /// Most negative x-power appearing.
  int min_xpow() const;
  bool has_gaussian() const;

 private:
  void merge();
  std::vector<KernelTerm> terms_;
};

}  // namespace opint
