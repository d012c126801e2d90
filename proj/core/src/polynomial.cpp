#include "opint/polynomial.hpp"

#include <sstream>

namespace opint {

void Polynomial::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Scalar Polynomial::leading() const {
  if (c_.empty()) throw DomainError("leading coefficient of zero polynomial");
  return c_.back();
}

bool Polynomial::is_exact() const {
  for (const auto& v : c_)
    if (!v.is_exact()) return false;
  return true;
}

Scalar Polynomial::eval(const Scalar& x) const {
  Scalar acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  std::vector<Scalar> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = Scalar(static_cast<long>(k)) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted_to(const Scalar& a) const {
  // In-place Taylor shift: repeated synthetic division by (x - a).
  std::vector<Scalar> p = c_;
  int n = static_cast<int>(p.size());
  for (int k = 0; k < n; ++k)
    for (int j = n - 2; j >= k; --j) p[j] += a * p[j + 1];
  return Polynomial(std::move(p));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Scalar> r(std::max(a.c_.size(), b.c_.size()), Scalar(0));
  for (size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
  return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Scalar> r(std::max(a.c_.size(), b.c_.size()), Scalar(0));
  for (size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k));
  return Polynomial(std::move(r));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<Scalar> r(a.c_.size() + b.c_.size() - 1, Scalar(0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(const Scalar& s) const {
  std::vector<Scalar> r = c_;
  for (auto& v : r) v *= s;
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-() const { return *this * Scalar(-1); }

void Polynomial::divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Scalar> rem = a.c_;
  int db = b.degree();
  Scalar lead = b.leading();
  std::vector<Scalar> quot;
  int dq = static_cast<int>(rem.size()) - 1 - db;
  if (dq < 0) {
    q = Polynomial();
    r = a;
    return;
  }
  quot.assign(dq + 1, Scalar(0));
  for (int k = dq; k >= 0; --k) {
    if (static_cast<size_t>(k + db) >= rem.size()) continue;
    Scalar f = rem[k + db] / lead;
    quot[k] = f;
    if (f.is_zero()) continue;
    for (int j = 0; j <= db; ++j) rem[k + j] -= f * b.c_[j];
  }
  q = Polynomial(std::move(quot));
  r = Polynomial(std::move(rem));
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
  if (!a.is_exact() || !b.is_exact())
    throw DomainError("polynomial gcd requires exact coefficients");
  while (!b.is_zero()) {
    Polynomial q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
    if (!b.is_zero()) b = b.monic();
  }
  if (a.is_zero()) return a;
  return a.monic();
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return *this * leading().inverse();
}

std::string Polynomial::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    Scalar v = coeff(k);
    if (v.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0) {
      os << v.str();
    } else {
      if (!(v == Scalar(1))) os << v.str() << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

}  // namespace opint
