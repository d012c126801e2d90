#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "opint/kernel_expr.hpp"
#include "opint/power_series.hpp"
#include "opint/scalar.hpp"

namespace opint {

/// The unit multiplying the derivative inside f(nu * d/d eps).
enum class Nu { plus_one, minus_one, plus_i, minus_i };

Scalar nu_value(Nu nu);

/// A function of the derivative operator, f(nu * d), where f is carried
/// either as a truncated series or as a named builtin with a closed form.
struct DiffOperator {
  std::variant<PowerSeries, PowerSeries::Builtin> symbol;
  Nu nu = Nu::plus_one;

  static DiffOperator from_series(PowerSeries f, Nu nu = Nu::plus_one) {
    return {std::move(f), nu};
  }
  static DiffOperator from_builtin(PowerSeries::Builtin f, Nu nu = Nu::plus_one) {
    return {f, nu};
  }
};

/// Eigenfunction rule f(nu d) e^{a eps} = f(nu a) e^{a eps}.
/// Returns the scalar f(nu a) together with the (unchanged) kernel.
struct EigenResult {
  Scalar factor;
  KernelExpr kernel;
};
EigenResult apply_to_exponential(const DiffOperator& op, const Scalar& a);

/// Coefficient-level application of f(nu d) to a truncated series:
/// result_m = sum_n c_n nu^n (m+n)!/m! t_{m+n}.
PowerSeries apply_series_operator(const DiffOperator& op, const PowerSeries& target);

/// Square matrices acting on the monomial basis {1, eps, ..., eps^N}.
struct OperatorMatrix {
  enum class Role { derivative, multiply_by_eps, general };
  int dim = 0;  // N+1
  Role role = Role::general;
  std::vector<Scalar> m;  // row-major

  Scalar& at(int r, int c) { return m[static_cast<size_t>(r) * dim + c]; }
  const Scalar& at(int r, int c) const { return m[static_cast<size_t>(r) * dim + c]; }

  static OperatorMatrix zero(int dim, Role role = Role::general);
  static OperatorMatrix identity(int dim);
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  OperatorMatrix scale(const Scalar& s) const;
  OperatorMatrix pow(int n) const;
  double max_abs() const;
  bool is_exactly_zero() const;
};

enum class BasicOperator { derivative, mult_eps };

OperatorMatrix operator_matrix(BasicOperator op, int order);
OperatorMatrix operator_matrix(const DiffOperator& op, int order);

/// Residual of f'(d) = f(d) eps - eps f(d) realized as matrices, restricted
/// to the columns the truncation leaves intact (degrees 0..N-deg(f)-1).
/// Exactly zero (and exact) for exact polynomial input.
Scalar commutator_derivative_check(const PowerSeries& f, int order);

}  // namespace opint
