#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opint/kernel_expr.hpp"
#include "opint/polynomial.hpp"
#include "opint/power_series.hpp"
#include "opint/scalar.hpp"

namespace opint {

/// Ratio of polynomials with exact normalization: gcd(num, den) = 1 when
/// both are exact, denominator nonzero.  A factored form of the
/// denominator is kept when it is known by construction.
class RationalFunction {
 public:
  struct Factor {
    Scalar root;
    int multiplicity;
  };

  RationalFunction(Polynomial num, Polynomial den);
  RationalFunction(Polynomial num, Polynomial den, std::vector<Factor> known_factors);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool proper() const { return num_.degree() < den_.degree(); }
  const std::optional<std::vector<Factor>>& known_factors() const { return factors_; }

  Scalar eval(const Scalar& x) const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  bool equivalent(const RationalFunction& o) const;  // cross-multiplied equality

  std::string str(const std::string& var = "x") const;

 private:
  void normalize();
  Polynomial num_, den_;
  std::optional<std::vector<Factor>> factors_;
};

/// Finite sums  sum_j w_j x^{k_j} e^{a_j x}, implicitly times Theta(x).
class ExpPoly {
 public:
  struct Term {
    Scalar weight;
    int power = 0;  // k >= 0
    Scalar rate;    // a, complex
  };

  ExpPoly() = default;
  explicit ExpPoly(std::vector<Term> terms) : terms_(std::move(terms)) { merge(); }
  static ExpPoly constant(const Scalar& w) { return ExpPoly({Term{w, 0, Scalar(0)}}); }
  static ExpPoly exponential(const Scalar& w, const Scalar& rate, int power = 0) {
    return ExpPoly({Term{w, power, rate}});
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  friend ExpPoly operator+(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator-(const ExpPoly& a, const ExpPoly& b);
  ExpPoly scale(const Scalar& s) const;
  bool operator==(const ExpPoly& o) const;

  Scalar eval(const Scalar& x) const;
  /// Largest |term| difference from `o` over a sample grid in (0, hi].
  double max_difference(const ExpPoly& o, double hi = 10.0, int samples = 50) const;

  std::string str(const std::string& var = "x") const;

 private:
  void merge();
  std::vector<Term> terms_;
};

/// Forward transform of an ExpPoly: exact rational function of x
/// (x^k e^{ax} -> k!/(x-a)^{k+1}), with the denominator factorization
/// recorded.
RationalFunction laplace_forward_rational(const ExpPoly& f);
/// Same image as a kernel expression in x (shifted reciprocal atoms).
KernelExpr laplace_forward_symbolic(const ExpPoly& f);
/// Numeric evaluation at x; requires x to the right of every rate.
Scalar laplace_forward_at(const ExpPoly& f, const Scalar& x);

/// Term-wise image of a truncated series: an asymptotic expansion in 1/x,
/// evaluated by optimal truncation.  Not a convergent representation.
struct AsymptoticValue {
  Scalar value;
  int terms_used = 0;
  double first_dropped = 0.0;  // magnitude of the first omitted term
  bool asymptotic = true;
};
AsymptoticValue laplace_forward_series_at(const PowerSeries& f, const Scalar& x);

/// Inverse transform of a proper rational function through the resolvent
/// rule on delta; exact when the poles are exactly representable.
ExpPoly laplace_inverse_rational(const RationalFunction& r, int max_pole_order = 8);

/// max |(L^{-1} . L)f - f| over a grid in (0, 10]; exactly 0 symbolically
/// for exact input.
double laplace_roundtrip_check(const ExpPoly& f, double tol);

/// Discrete spectrum: positive rates with positive weights, ascending.
class SpectralComb {
 public:
  struct Line {
    Scalar rate;    // lambda_n > 0
    Scalar weight;  // > 0
  };
  SpectralComb() = default;
  explicit SpectralComb(std::vector<Line> lines) : lines_(std::move(lines)) { canonicalize(); }
  const std::vector<Line>& lines() const { return lines_; }
  bool operator==(const SpectralComb& o) const;

 private:
  void canonicalize();
  std::vector<Line> lines_;
};

/// h(t) = sum w_n e^{-lambda_n t}, summed stably (largest term factored out).
double heat_trace(const SpectralComb& spec, double t);
/// Trace as a symbolic ExpPoly in t.
ExpPoly heat_trace_exppoly(const SpectralComb& spec);

/// Recover the comb from a pure-exponential trace via the shift-on-delta
/// rule; exact inversion.
SpectralComb spectrum_recover(const ExpPoly& trace);

struct CombRenderScheme {
  enum class Shape { gaussian, sinc };
  Shape shape = Shape::gaussian;
  double width = 0.01;
};
/// Regularized comb sampled on a grid.
std::vector<double> comb_render(const SpectralComb& spec, const CombRenderScheme& reg,
                                const std::vector<double>& grid);

/// Roots of an exact polynomial: exact for degrees <= 2 and rational roots,
/// Durand-Kerner iteration with a residual check otherwise.
std::vector<RationalFunction::Factor> polynomial_roots(const Polynomial& p);

}  // namespace opint
