#pragma once

#include <string>
#include <vector>

#include "opint/scalar.hpp"

namespace opint {

/// Policy for the integration constant introduced by each antiderivative.
struct ConstantPolicy {
  enum class Mode { zero, symbolic, prescribed };
  Mode mode = Mode::zero;
  Scalar value;  // prescribed mode only

  static ConstantPolicy zero() { return {Mode::zero, Scalar(0)}; }
  static ConstantPolicy symbolic() { return {Mode::symbolic, Scalar(0)}; }
  static ConstantPolicy prescribed(const Scalar& v) { return {Mode::prescribed, v}; }
};

/// Symbolic linear combination of kernel atoms.  Each atom is
///
///     weight * u^power * e^{rate*u} * Base(u),     u = eps - shift,
///
/// which is closed (for the bases below) under exact translation,
/// differentiation and the antiderivatives the integral representations
/// need.  Distributional atoms are shifted as symbols, never expanded.
class KernelExpr {
 public:
  enum class Base {
    one,          // no extra factor
    log_u,        // ln(u), principal branch
    theta,        // Heaviside step
    delta,        // Dirac delta (exact)
    delta_gauss,  // e^{-u^2/(4w)} / sqrt(4 pi w), param = w
    theta_gauss,  // (1 + erf(u/(2 sqrt w))) / 2,  param = w
    delta_sinc,   // sin(L u) / (pi u),            param = L
    theta_sinc,   // 1/2 + Si(L u)/pi,             param = L
    ei,           // Ei(c u),                      param = c (real)
    const_symbol  // symbolic integration constant c_id
  };

  struct Atom {
    Scalar weight;
    int power = 0;
    Scalar rate;
    Scalar shift;
    Base base = Base::one;
    Scalar base_param;
    int symbol_id = 0;
  };

  KernelExpr() = default;
  explicit KernelExpr(std::vector<Atom> atoms) : atoms_(std::move(atoms)) { canonicalize(); }

  static KernelExpr zero() { return KernelExpr(); }
  static KernelExpr constant(const Scalar& v);
  static KernelExpr monomial(int k, const Scalar& weight = Scalar(1));
  /// 1/eps
  static KernelExpr recip();
  /// e^{a*eps} * eps^k
  static KernelExpr exp_poly(const Scalar& a, int k = 0, const Scalar& weight = Scalar(1));
  static KernelExpr log_atom();
  static KernelExpr delta();
  static KernelExpr delta_at(const Scalar& shift);
  static KernelExpr theta_at(const Scalar& shift);
  static KernelExpr gaussian_delta(const Scalar& width, const Scalar& shift = Scalar(0));
  static KernelExpr sinc_delta(const Scalar& cutoff, const Scalar& shift = Scalar(0));
  static KernelExpr const_symbol(int id);

  bool empty() const { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  KernelExpr scale(const Scalar& s) const;
  friend KernelExpr operator+(const KernelExpr& a, const KernelExpr& b);
  friend KernelExpr operator-(const KernelExpr& a, const KernelExpr& b);
  bool operator==(const KernelExpr& o) const;

  /// Exact translation: result(eps) = (*this)(eps + a).
  KernelExpr shift_by(const Scalar& a) const;
  /// Symbolic d/d eps.
  KernelExpr differentiate() const;
  /// Symbolic antiderivative; adds one integration constant per call
  /// according to the policy.  `next_symbol` numbers symbolic constants.
  KernelExpr antiderivative(const ConstantPolicy& policy, int& next_symbol) const;
  /// Heat semigroup e^{a d^2/d eps^2}: delta -> Gaussian of width a,
  /// Gaussian widths add.
  KernelExpr heat_semigroup(const Scalar& a) const;
  /// (d/deps - a)^{-1} via the Schwinger representation; closed form on
  /// delta/theta atoms, eigenvalue rule otherwise (requires Re(rate-a)<0
  /// unless `allow_marginal`).
  KernelExpr resolvent(const Scalar& a, bool allow_marginal = false) const;

  enum class Side { none, plus, minus };

  /// Evaluate at a concrete point (throws on poles / distributional atoms).
  Scalar eval_at(const Scalar& eps, Side side = Side::none) const;
  /// Dedicated eps -> 0 (or 0^±) limit mode: singular parts must cancel
  /// across atoms or a DivergenceError is thrown; surviving symbolic
  /// constants raise ConstantError.
  Scalar limit_at_zero(Side side) const;

  /// True if any atom still references a symbolic constant.
  bool has_symbolic_constant() const;

  std::string str(const std::string& var = "eps") const;

 private:
  void canonicalize();
  std::vector<Atom> atoms_;
};

}  // namespace opint
