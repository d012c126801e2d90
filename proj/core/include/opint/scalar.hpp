#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace opint {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input is outside the class of functions an engine supports.
class ClassError : public Error {
 public:
  explicit ClassError(const std::string& msg) : Error(msg) {}
};

/// A limit or extrapolation failed to settle on a finite value.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& msg) : Error(msg) {}
};

/// A symbolic integration constant survived to the final result.
class ConstantError : public Error {
 public:
  explicit ConstantError(const std::string& msg) : Error(msg) {}
};

/// Argument outside a function's domain, or a precondition violation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// A result could not be certified to the requested tolerance.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

/// Complex scalar that is either exact (Gaussian rational, arbitrary
/// precision) or floating (std::complex<double>).  Arithmetic between two
/// exact values stays exact; anything touching a floating value demotes.
class Scalar {
 public:
  Scalar() : exact_(true), re_(0), im_(0) {}
  Scalar(int n) : exact_(true), re_(n), im_(0) {}
  Scalar(long n) : exact_(true), re_(n), im_(0) {}

  static Scalar rational(long num, long den);
  static Scalar from_mpq(const mpq_class& re, const mpq_class& im = mpq_class(0));
  static Scalar real(double x) { return Scalar(std::complex<double>(x, 0.0)); }
  static Scalar complex(std::complex<double> z) { return Scalar(z); }
  static Scalar i() { return from_mpq(mpq_class(0), mpq_class(1)); }
  /// Exact value of a finite decimal string such as "-2.5" or "1/3".
  static Scalar parse_exact(const std::string& text);

  bool is_exact() const { return exact_; }
  bool is_zero() const;
  bool is_real() const;
  bool is_integer() const;
  /// Real part as long; precondition: exact integer.
  long as_integer() const;

  const mpq_class& re_rational() const { return re_; }
  const mpq_class& im_rational() const { return im_; }
  std::complex<double> to_complex() const;
  double to_double() const { return to_complex().real(); }
  double abs() const { return std::abs(to_complex()); }

  Scalar operator-() const;
  Scalar conj() const;
  /// Squared modulus; exact for exact input.
  Scalar abs2() const;
  Scalar inverse() const;
  Scalar pow(int n) const;
  /// Exact square root when one exists in the Gaussian rationals.
  std::optional<Scalar> exact_sqrt() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  /// Structural equality: exact vs exact compares rationals, otherwise
  /// compares the complex images bit-for-bit.
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  /// Deterministic total order for canonical sorting.
  static int compare(const Scalar& a, const Scalar& b);

  std::string str() const;

 private:
  explicit Scalar(std::complex<double> z) : exact_(false), re_(0), im_(0), fl_(z) {}

  bool exact_;
  mpq_class re_, im_;
  std::complex<double> fl_{0.0, 0.0};
};

inline Scalar operator+(int a, const Scalar& b) { return Scalar(a) + b; }
inline Scalar operator*(int a, const Scalar& b) { return Scalar(a) * b; }

}  // namespace opint
