#include "opint/kernel_integrand.hpp"

#include <algorithm>
#include <cmath>

namespace opint {

void KernelIntegrand::merge() {
  auto key_less = [](const KernelTerm& a, const KernelTerm& b) {
    int c = Scalar::compare(a.gauss, b.gauss);
    if (c != 0) return c < 0;
    c = Scalar::compare(a.rate, b.rate);
    if (c != 0) return c < 0;
    return a.xpow < b.xpow;
  };
  std::sort(terms_.begin(), terms_.end(), key_less);
  std::vector<KernelTerm> out;
  for (const KernelTerm& t : terms_) {
    if (t.coef.is_zero()) continue;
    if (!out.empty() && out.back().xpow == t.xpow && out.back().rate == t.rate &&
        out.back().gauss == t.gauss) {
      out.back().coef += t.coef;
      continue;
    }
    out.push_back(t);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const KernelTerm& t) { return t.coef.is_zero(); }),
            out.end());
  terms_ = std::move(out);
}

KernelIntegrand operator+(const KernelIntegrand& a, const KernelIntegrand& b) {
  std::vector<KernelTerm> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return KernelIntegrand(std::move(t));
}

KernelIntegrand operator*(const KernelIntegrand& a, const KernelIntegrand& b) {
  std::vector<KernelTerm> t;
  t.reserve(a.terms_.size() * b.terms_.size());
  for (const KernelTerm& x : a.terms_)
    for (const KernelTerm& y : b.terms_)
      t.push_back(KernelTerm{x.coef * y.coef, x.xpow + y.xpow, x.rate + y.rate,
                             x.gauss + y.gauss});
  return KernelIntegrand(std::move(t));
}

KernelIntegrand KernelIntegrand::scale(const Scalar& s) const {
  std::vector<KernelTerm> t = terms_;
  for (auto& x : t) x.coef *= s;
  return KernelIntegrand(std::move(t));
}

KernelIntegrand KernelIntegrand::reflect() const {
  std::vector<KernelTerm> t = terms_;
  for (auto& x : t) {
    if (x.xpow % 2 != 0) x.coef = -x.coef;
    x.rate = -x.rate;
  }
  return KernelIntegrand(std::move(t));
}

std::complex<double> KernelIntegrand::eval(double x) const {
  if (std::abs(x) < 1e-3 && min_xpow() < 0) {
    auto s = local_series(12);
    if (s) {
      Scalar v = s->eval(Scalar::real(x)).value;
      return v.to_complex();
    }
    // genuine pole: fall through to the direct formula (diverges as it should)
  }
  std::complex<double> acc = 0.0;
  for (const KernelTerm& t : terms_) {
    std::complex<double> v = t.coef.to_complex();
    if (t.xpow != 0) v *= std::pow(std::complex<double>(x, 0.0), t.xpow);
    auto r = t.rate.to_complex();
    double g = t.gauss.to_double();
    std::complex<double> expo = r * x - std::complex<double>(g * x * x, 0.0);
    if (expo != std::complex<double>(0.0, 0.0)) v *= std::exp(expo);
    acc += v;
  }
  return acc;
}

std::optional<PowerSeries> KernelIntegrand::local_series(int order) const {
  int m = std::max(0, -min_xpow());
  int work = order + m;
  PowerSeries acc = PowerSeries::zero(work);
  for (const KernelTerm& t : terms_) {
    // series of e^{rate x} * e^{-gauss x^2}, exact
    PowerSeries e = PowerSeries::constant(t.coef, work);
    if (!t.rate.is_zero()) {
      PowerSeries lin = PowerSeries::monomial(1, work).scale(t.rate);
      e = e * PowerSeries::known(PowerSeries::Builtin::exp, {}, work).compose(lin);
    }
    if (!t.gauss.is_zero()) {
      // e^{-g x^2} coefficients (-g)^k / k!
      std::vector<Scalar> c(work + 1, Scalar(0));
      Scalar p(1);
      mpz_class fact(1);
      for (int k = 0; 2 * k <= work; ++k) {
        if (k > 0) {
          fact *= k;
          p *= -t.gauss;
        }
        c[2 * k] = p * Scalar::from_mpq(mpq_class(1, fact));
      }
      e = e * PowerSeries(std::move(c));
    }
    // multiply by x^{xpow}: may shift down; collect raw offset coefficients
    int off = t.xpow + m;  // >= 0
    std::vector<Scalar> shifted(work + 1, Scalar(0));
    for (int k = 0; k + off <= work && k <= work; ++k)
      if (k + off >= 0) shifted[k + off] = e.coeff(k);
    acc = acc + PowerSeries(std::move(shifted));
  }
  // acc now holds x^m * f(x); the first m coefficients must vanish.
  for (int k = 0; k < m; ++k) {
    Scalar c = acc.coeff(k);
    if (c.is_exact() ? !c.is_zero() : c.abs() > 1e-12) return std::nullopt;
  }
  std::vector<Scalar> out(order + 1, Scalar(0));
  for (int k = 0; k <= order; ++k) out[k] = acc.coeff(k + m);
  return PowerSeries(std::move(out));
}

std::vector<double> KernelIntegrand::frequencies() const {
  std::vector<double> out;
  for (const KernelTerm& t : terms_) {
    double w = std::abs(t.rate.to_complex().imag());
    if (w > 0) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            out.end());
  return out;
}

int KernelIntegrand::min_xpow() const {
  int m = 0;
  for (const KernelTerm& t : terms_) m = std::min(m, t.xpow);
  return m;
}

bool KernelIntegrand::has_gaussian() const {
  for (const KernelTerm& t : terms_)
    if (!t.gauss.is_zero()) return true;
  return false;
}

}  // namespace opint
