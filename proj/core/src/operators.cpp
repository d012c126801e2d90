#include "opint/operators.hpp"

#include <cmath>

namespace opint {

Scalar nu_value(Nu nu) {
  switch (nu) {
    case Nu::plus_one:
      return Scalar(1);
    case Nu::minus_one:
      return Scalar(-1);
    case Nu::plus_i:
      return Scalar::i();
    case Nu::minus_i:
      return -Scalar::i();
  }
  throw DomainError("bad nu");
}

namespace {

Scalar eval_builtin_closed(PowerSeries::Builtin f, const Scalar& z) {
  auto zc = z.to_complex();
  using B = PowerSeries::Builtin;
  switch (f) {
    case B::sin:
      return Scalar::complex(std::sin(zc));
    case B::cos:
      return Scalar::complex(std::cos(zc));
    case B::exp:
      return Scalar::complex(std::exp(zc));
    case B::sinc:
      if (z.is_zero()) return Scalar(1);
      return Scalar::complex(std::sin(zc) / zc);
    case B::geometric_1_over_1_plus_x2: {
      Scalar den = Scalar(1) + z * z;
      if (den.is_zero()) throw DomainError("pole of 1/(1+x^2) at x = +/- i");
      return den.inverse();
    }
    case B::gaussian:
      return Scalar::complex(std::exp(-zc * zc));
  }
  throw DomainError("bad builtin");
}

}  // namespace

EigenResult apply_to_exponential(const DiffOperator& op, const Scalar& a) {
  Scalar arg = nu_value(op.nu) * a;
  Scalar factor;
  if (std::holds_alternative<PowerSeries::Builtin>(op.symbol)) {
    factor = eval_builtin_closed(std::get<PowerSeries::Builtin>(op.symbol), arg);
  } else {
    const PowerSeries& s = std::get<PowerSeries>(op.symbol);
    // Series with slack order are terminating polynomials; only genuinely
    // truncated symbols get the disc check.
    bool polynomial_like = s.is_exact() && s.last_nonzero() + 4 <= s.order();
    double radius = s.radius_estimate();
    if (!polynomial_like && std::isfinite(radius) && arg.abs() >= radius)
      throw DomainError("series evaluation outside the estimated convergence disc");
    factor = s.eval(arg).value;
  }
  return {factor, KernelExpr::exp_poly(a)};
}

PowerSeries apply_series_operator(const DiffOperator& op, const PowerSeries& target) {
  const PowerSeries* fs;
  PowerSeries tmp = PowerSeries::zero(0);
  if (std::holds_alternative<PowerSeries>(op.symbol)) {
    fs = &std::get<PowerSeries>(op.symbol);
  } else {
    // A builtin symbol has no inherent truncation: split the order budget so
    // the result keeps half the target's resolution.
    tmp = PowerSeries::known(std::get<PowerSeries::Builtin>(op.symbol), {},
                             target.order() / 2);
    fs = &tmp;
  }
  const PowerSeries& f = *fs;
  int nf = f.order();
  int nt = target.order();
  if (nt < nf) throw DomainError("target order must be at least the operator series order");
  int nout = nt - nf;
  Scalar nu = nu_value(op.nu);

  std::vector<Scalar> out(nout + 1, Scalar(0));
  for (int m = 0; m <= nout; ++m) {
    Scalar acc(0);
    // (m+n)!/m! accumulated exactly
    mpz_class rising(1);
    Scalar nu_pow(1);
    for (int n = 0; n <= nf; ++n) {
      if (n > 0) {
        rising *= (m + n);
        nu_pow *= nu;
      }
      const Scalar& cn = f.coeff(n);
      if (!cn.is_zero())
        acc += cn * nu_pow * Scalar::from_mpq(mpq_class(rising)) * target.coeff(m + n);
    }
    out[m] = acc;
  }
  return PowerSeries(std::move(out), target.center());
}

OperatorMatrix OperatorMatrix::zero(int dim, Role role) {
  OperatorMatrix r;
  r.dim = dim;
  r.role = role;
  r.m.assign(static_cast<size_t>(dim) * dim, Scalar(0));
  return r;
}

OperatorMatrix OperatorMatrix::identity(int dim) {
  auto r = zero(dim);
  for (int i = 0; i < dim; ++i) r.at(i, i) = Scalar(1);
  return r;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim != b.dim) throw DomainError("matrix dimension mismatch");
  auto r = OperatorMatrix::zero(a.dim);
  for (int i = 0; i < a.dim; ++i)
    for (int k = 0; k < a.dim; ++k) {
      const Scalar& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < a.dim; ++j) {
        const Scalar& bkj = b.at(k, j);
        if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
      }
    }
  return r;
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim != b.dim) throw DomainError("matrix dimension mismatch");
  auto r = a;
  r.role = OperatorMatrix::Role::general;
  for (size_t i = 0; i < r.m.size(); ++i) r.m[i] -= b.m[i];
  return r;
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim != b.dim) throw DomainError("matrix dimension mismatch");
  auto r = a;
  r.role = OperatorMatrix::Role::general;
  for (size_t i = 0; i < r.m.size(); ++i) r.m[i] += b.m[i];
  return r;
}

OperatorMatrix OperatorMatrix::scale(const Scalar& s) const {
  auto r = *this;
  for (auto& v : r.m) v *= s;
  return r;
}

OperatorMatrix OperatorMatrix::pow(int n) const {
  if (n < 0) throw DomainError("negative matrix power");
  auto acc = identity(dim);
  auto base = *this;
  while (n) {
    if (n & 1) acc = acc * base;
    if (n >>= 1) base = base * base;
  }
  return acc;
}

double OperatorMatrix::max_abs() const {
  double mx = 0.0;
  for (const auto& v : m) mx = std::max(mx, v.abs());
  return mx;
}

bool OperatorMatrix::is_exactly_zero() const {
  for (const auto& v : m)
    if (!v.is_zero()) return false;
  return true;
}

OperatorMatrix operator_matrix(BasicOperator op, int order) {
  if (order < 1) throw DomainError("operator matrix needs order >= 1");
  auto r = OperatorMatrix::zero(order + 1, op == BasicOperator::derivative
                                               ? OperatorMatrix::Role::derivative
                                               : OperatorMatrix::Role::multiply_by_eps);
  if (op == BasicOperator::derivative) {
    for (int m = 0; m + 1 <= order; ++m) r.at(m, m + 1) = Scalar(m + 1);
  } else {
    for (int m = 0; m + 1 <= order; ++m) r.at(m + 1, m) = Scalar(1);
  }
  return r;
}

OperatorMatrix operator_matrix(const DiffOperator& op, int order) {
  const PowerSeries* fs;
  PowerSeries tmp = PowerSeries::zero(0);
  if (std::holds_alternative<PowerSeries>(op.symbol)) {
    fs = &std::get<PowerSeries>(op.symbol);
  } else {
    tmp = PowerSeries::known(std::get<PowerSeries::Builtin>(op.symbol), {}, order);
    fs = &tmp;
  }
  auto d = operator_matrix(BasicOperator::derivative, order);
  auto acc = OperatorMatrix::zero(order + 1);
  auto dn = OperatorMatrix::identity(order + 1);
  Scalar nu = nu_value(op.nu);
  Scalar nun(1);
  for (int n = 0; n <= fs->order(); ++n) {
    if (n > 0) {
      dn = dn * d;
      nun *= nu;
      if (dn.is_exactly_zero()) break;
    }
    const Scalar& cn = fs->coeff(n);
    if (!cn.is_zero()) acc = acc + dn.scale(cn * nun);
  }
  acc.role = OperatorMatrix::Role::general;
  return acc;
}

Scalar commutator_derivative_check(const PowerSeries& f, int order) {
  int deg = f.last_nonzero();
  if (deg < 0) return Scalar(0);  // zero series: both sides vanish
  if (order - deg < 1) throw DomainError("order window too small for this series degree");

  auto fd = operator_matrix(DiffOperator::from_series(f), order);
  auto fprime = operator_matrix(DiffOperator::from_series(f.differentiate()), order);
  auto e = operator_matrix(BasicOperator::mult_eps, order);
  auto rhs = fd * e - e * fd;
  auto resid = fprime - rhs;

  // truncation corrupts only the top columns; check degrees 0..N-deg-1
  Scalar max_resid(0);
  bool exact = true;
  double max_abs = 0.0;
  for (int r = 0; r <= order; ++r)
    for (int c = 0; c + deg + 1 <= order; ++c) {
      const Scalar& v = resid.at(r, c);
      if (!v.is_exact()) exact = false;
      if (!v.is_zero()) max_abs = std::max(max_abs, v.abs());
    }
  if (exact && max_abs == 0.0) return Scalar(0);
  max_resid = Scalar::real(max_abs);
  return max_resid;
}

}  // namespace opint
