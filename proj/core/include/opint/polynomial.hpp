#pragma once

#include <vector>

#include "opint/scalar.hpp"

namespace opint {

/// Dense univariate polynomial with Scalar coefficients, ascending degree.
/// The zero polynomial has an empty coefficient vector and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Polynomial constant(const Scalar& v) { return Polynomial({v}); }
  static Polynomial x() { return Polynomial({Scalar(0), Scalar(1)}); }
  /// (x - root)
  static Polynomial linear_root(const Scalar& root) {
    return Polynomial({-root, Scalar(1)});
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Scalar(0);
  }
  Scalar leading() const;
  bool is_exact() const;

  Scalar eval(const Scalar& x) const;
  Polynomial derivative() const;
  /// Coefficients rewritten in powers of (x - a), exact for exact input.
  Polynomial shifted_to(const Scalar& a) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator*(const Scalar& s) const;
  Polynomial operator-() const;
  bool operator==(const Polynomial& o) const { return c_ == o.c_; }

  /// Euclidean division; throws on zero divisor.
  static void divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r);
  /// Monic gcd via Euclid; requires exact coefficients.
  static Polynomial gcd(Polynomial a, Polynomial b);
  Polynomial monic() const;

  std::string str(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Scalar> c_;
};

}  // namespace opint
