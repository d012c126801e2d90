#pragma once

#include <string>
#include <vector>

#include "opint/scalar.hpp"

namespace opint {

/// Truncated Maclaurin/Taylor series: coefficients c_0..c_N about `center`.
/// Coefficients are exact Gaussian rationals whenever constructible; mixing
/// exact and floating series demotes to floating.
class PowerSeries {
 public:
  enum class Builtin { sin, cos, exp, sinc, geometric_1_over_1_plus_x2, gaussian };

  PowerSeries(std::vector<Scalar> coeffs, Scalar center = Scalar(0));
  static PowerSeries zero(int order);
  static PowerSeries constant(const Scalar& v, int order);
  /// x as a series of the given order (coefficient 1 at degree 1).
  static PowerSeries identity(int order);
  static PowerSeries monomial(int degree, int order);
  /// Exact Maclaurin coefficients of a named function through order N.
  static PowerSeries known(Builtin f, const std::vector<Scalar>& params, int order);
  static Builtin builtin_from_name(const std::string& name);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Scalar(0);
  }
  const Scalar& center() const { return center_; }
  bool is_exact() const;
  /// True when only finitely many coefficients are nonzero and they are all
  /// present (i.e., the series is an exact polynomial representation).
  int last_nonzero() const;

  friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
  friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
  PowerSeries scale(const Scalar& s) const;
  /// Composition a(b(x)); requires b's constant term to vanish.
  PowerSeries compose(const PowerSeries& inner) const;
  /// Multiplicative inverse; requires nonzero constant term.
  PowerSeries reciprocal() const;
  /// Multiply by x^k (k may be negative; negative requires the low
  /// coefficients to vanish).
  PowerSeries shift_degree(int k) const;

  PowerSeries differentiate() const;
  PowerSeries antiderivative() const;

  struct Eval {
    Scalar value;
    double tail_estimate;
    bool bounded;  // false when the geometric tail heuristic has no bound
  };
  /// Horner evaluation with a geometric tail estimate.
  Eval eval(const Scalar& x) const;

  /// Ratio-test estimate over the last 8 nonzero coefficients; returns
  /// +infinity for (near-)entire series.
  double radius_estimate() const;

  bool operator==(const PowerSeries& o) const { return c_ == o.c_ && center_ == o.center_; }
  std::string str(const std::string& var = "x") const;

 private:
  std::vector<Scalar> c_;
  Scalar center_;
};

}  // namespace opint
