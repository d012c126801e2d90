#include "opint/power_series.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace opint {

PowerSeries::PowerSeries(std::vector<Scalar> coeffs, Scalar center)
    : c_(std::move(coeffs)), center_(std::move(center)) {
  if (c_.empty()) throw DomainError("power series needs at least the constant term");
}

PowerSeries PowerSeries::zero(int order) {
  if (order < 0) throw DomainError("negative truncation order");
  return PowerSeries(std::vector<Scalar>(order + 1, Scalar(0)));
}

PowerSeries PowerSeries::constant(const Scalar& v, int order) {
  auto s = zero(order);
  s.c_[0] = v;
  return s;
}

PowerSeries PowerSeries::identity(int order) { return monomial(1, order); }

PowerSeries PowerSeries::monomial(int degree, int order) {
  if (degree < 0 || degree > order) throw DomainError("monomial degree outside order");
  auto s = zero(order);
  s.c_[degree] = Scalar(1);
  return s;
}

PowerSeries PowerSeries::known(Builtin f, const std::vector<Scalar>& params, int order) {
  if (order < 0) throw DomainError("negative truncation order");
  if (!params.empty()) throw DomainError("builtin series take no parameters");
  std::vector<Scalar> c(order + 1, Scalar(0));
  // factorial accumulator kept exact
  mpz_class fact(1);
  switch (f) {
    case Builtin::exp:
      for (int n = 0; n <= order; ++n) {
        if (n > 0) fact *= n;
        c[n] = Scalar::from_mpq(mpq_class(1, fact));
      }
      break;
    case Builtin::sin:
      for (int n = 0; n <= order; ++n) {
        if (n > 0) fact *= n;
        if (n % 2 == 1) {
          Scalar v = Scalar::from_mpq(mpq_class(1, fact));
          c[n] = ((n / 2) % 2 == 0) ? v : -v;
        }
      }
      break;
    case Builtin::cos:
      for (int n = 0; n <= order; ++n) {
        if (n > 0) fact *= n;
        if (n % 2 == 0) {
          Scalar v = Scalar::from_mpq(mpq_class(1, fact));
          c[n] = ((n / 2) % 2 == 0) ? v : -v;
        }
      }
      break;
    case Builtin::sinc:
      // sin(x)/x: c_{2k} = (-1)^k/(2k+1)!
      for (int n = 0; n <= order; ++n) {
        fact *= (n + 1);
        if (n % 2 == 0) {
          Scalar v = Scalar::from_mpq(mpq_class(1, fact));
          c[n] = ((n / 2) % 2 == 0) ? v : -v;
        }
      }
      break;
    case Builtin::geometric_1_over_1_plus_x2:
      for (int n = 0; n <= order; n += 2) c[n] = ((n / 2) % 2 == 0) ? Scalar(1) : Scalar(-1);
      break;
    case Builtin::gaussian:
      // e^{-x^2}: c_{2k} = (-1)^k/k!
      for (int k = 0; 2 * k <= order; ++k) {
        if (k > 0) fact *= k;
        Scalar v = Scalar::from_mpq(mpq_class(1, fact));
        c[2 * k] = (k % 2 == 0) ? v : -v;
      }
      break;
  }
  return PowerSeries(std::move(c));
}

PowerSeries::Builtin PowerSeries::builtin_from_name(const std::string& name) {
  if (name == "sin") return Builtin::sin;
  if (name == "cos") return Builtin::cos;
  if (name == "exp") return Builtin::exp;
  if (name == "sinc") return Builtin::sinc;
  if (name == "geometric_1_over_1_plus_x2") return Builtin::geometric_1_over_1_plus_x2;
  if (name == "gaussian") return Builtin::gaussian;
  throw DomainError("unknown builtin series: " + name);
}

bool PowerSeries::is_exact() const {
  for (const auto& v : c_)
    if (!v.is_exact()) return false;
  return true;
}

int PowerSeries::last_nonzero() const {
  for (int k = order(); k >= 0; --k)
    if (!c_[k].is_zero()) return k;
  return -1;
}

namespace {
void require_same_center(const PowerSeries& a, const PowerSeries& b) {
  if (!(a.center() == b.center())) throw DomainError("mismatched series centers");
}
}  // namespace

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b);
  int n = std::min(a.order(), b.order());
  std::vector<Scalar> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = a.coeff(k) + b.coeff(k);
  return PowerSeries(std::move(c), a.center());
}

PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b);
  int n = std::min(a.order(), b.order());
  std::vector<Scalar> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = a.coeff(k) - b.coeff(k);
  return PowerSeries(std::move(c), a.center());
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b);
  int n = std::min(a.order(), b.order());
  std::vector<Scalar> c(n + 1, Scalar(0));
  for (int i = 0; i <= n; ++i) {
    if (a.coeff(i).is_zero()) continue;
    for (int j = 0; i + j <= n; ++j) c[i + j] += a.coeff(i) * b.coeff(j);
  }
  return PowerSeries(std::move(c), a.center());
}

PowerSeries PowerSeries::scale(const Scalar& s) const {
  std::vector<Scalar> c = c_;
  for (auto& v : c) v *= s;
  return PowerSeries(std::move(c), center_);
}

PowerSeries PowerSeries::compose(const PowerSeries& inner) const {
  if (!inner.coeff(0).is_zero())
    throw DomainError("series composition requires zero inner constant term");
  int n = std::min(order(), inner.order());
  // Horner over series: result = c_N; result = result*inner + c_k
  PowerSeries acc = PowerSeries::zero(n);
  {
    std::vector<Scalar> c = acc.coeffs();
    c[0] = coeff(n);
    acc = PowerSeries(std::move(c), inner.center());
  }
  PowerSeries in = inner;
  if (inner.order() != n) {
    std::vector<Scalar> t(inner.coeffs().begin(), inner.coeffs().begin() + n + 1);
    in = PowerSeries(std::move(t), inner.center());
  }
  for (int k = n - 1; k >= 0; --k) {
    acc = acc * in;
    std::vector<Scalar> c = acc.coeffs();
    c[0] += coeff(k);
    acc = PowerSeries(std::move(c), in.center());
  }
  return acc;
}

PowerSeries PowerSeries::reciprocal() const {
  if (coeff(0).is_zero()) throw DomainError("series reciprocal at a zero constant term");
  int n = order();
  std::vector<Scalar> r(n + 1);
  Scalar inv0 = coeff(0).inverse();
  r[0] = inv0;
  for (int m = 1; m <= n; ++m) {
    Scalar s(0);
    for (int j = 1; j <= m; ++j) s += coeff(j) * r[m - j];
    r[m] = -inv0 * s;
  }
  return PowerSeries(std::move(r), center_);
}

PowerSeries PowerSeries::shift_degree(int k) const {
  int n = order();
  if (k >= 0) {
    std::vector<Scalar> c(n + 1, Scalar(0));
    for (int j = 0; j + k <= n; ++j) c[j + k] = coeff(j);
    return PowerSeries(std::move(c), center_);
  }
  int m = -k;
  for (int j = 0; j < m; ++j)
    if (!coeff(j).is_zero())
      throw DomainError("series division by x^" + std::to_string(m) +
                        " leaves a pole (nonzero low-order coefficient)");
  std::vector<Scalar> c(n + 1, Scalar(0));
  for (int j = m; j <= n; ++j) c[j - m] = coeff(j);
  return PowerSeries(std::move(c), center_);
}

PowerSeries PowerSeries::differentiate() const {
  if (order() == 0) return PowerSeries::zero(0);
  std::vector<Scalar> c(order());
  for (int k = 1; k <= order(); ++k) c[k - 1] = Scalar(k) * c_[k];
  return PowerSeries(std::move(c), center_);
}

PowerSeries PowerSeries::antiderivative() const {
  std::vector<Scalar> c(order() + 2, Scalar(0));
  for (int k = 0; k <= order(); ++k) c[k + 1] = c_[k] / Scalar(k + 1);
  return PowerSeries(std::move(c), center_);
}

PowerSeries::Eval PowerSeries::eval(const Scalar& x) const {
  Scalar dx = x - center_;
  Scalar acc(0);
  for (int k = order(); k >= 0; --k) acc = acc * dx + c_[k];

  // Geometric tail heuristic from the top two nonzero coefficients.
  int n1 = last_nonzero();
  Eval out{acc, 0.0, true};
  if (n1 <= 0) return out;
  int n0 = -1;
  for (int k = n1 - 1; k >= 0; --k)
    if (!c_[k].is_zero()) {
      n0 = k;
      break;
    }
  double ax = dx.abs();
  double top = c_[n1].abs() * std::pow(ax, n1);
  if (n0 < 0) {
    out.tail_estimate = top;
    return out;
  }
  double prev = c_[n0].abs() * std::pow(ax, n0);
  if (prev == 0.0) {
    out.tail_estimate = top;
    return out;
  }
  double r = std::pow(top / prev, 1.0 / (n1 - n0));
  if (r < 1.0) {
    out.tail_estimate = top / (1.0 - r);
  } else {
    out.tail_estimate = std::numeric_limits<double>::infinity();
    out.bounded = false;
  }
  return out;
}

double PowerSeries::radius_estimate() const {
  // Ratio test over the last 8 nonzero coefficients.
  std::vector<int> idx;
  for (int k = order(); k >= 0 && idx.size() < 9; --k)
    if (!c_[k].is_zero()) idx.push_back(k);
  if (idx.size() < 2) return std::numeric_limits<double>::infinity();
  double log_sum = 0.0;
  int count = 0;
  for (size_t j = 0; j + 1 < idx.size() && count < 8; ++j) {
    int hi = idx[j], lo = idx[j + 1];
    double ratio = c_[lo].abs() / c_[hi].abs();
    log_sum += std::log(ratio) / (hi - lo);
    ++count;
  }
  double r = std::exp(log_sum / count);
  if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
  if (r > 1e12) return std::numeric_limits<double>::infinity();
  return r;
}

std::string PowerSeries::str(const std::string& var) const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k <= order(); ++k) {
    if (c_[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[k].str();
    if (k >= 1) os << "*" << var;
    if (k >= 2) os << "^" << k;
  }
  if (first) os << "0";
  os << " + O(" << var << "^" << order() + 1 << ")";
  return os.str();
}

}  // namespace opint
