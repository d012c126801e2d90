#include "opint/scalar.hpp"

#include <cmath>
#include <sstream>

namespace opint {

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return from_mpq(q);
}

Scalar Scalar::from_mpq(const mpq_class& re, const mpq_class& im) {
  Scalar s;
  s.exact_ = true;
  s.re_ = re;
  s.im_ = im;
  s.re_.canonicalize();
  s.im_.canonicalize();
  return s;
}

Scalar Scalar::parse_exact(const std::string& text) {
  std::string t = text;
  bool neg = false;
  size_t pos = 0;
  if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
    neg = t[pos] == '-';
    ++pos;
  }
  t = t.substr(pos);
  if (t.empty()) throw DomainError("empty numeric literal");
  int dots = 0, slashes = 0;
  for (char c : t) {
    if (c == '.') ++dots;
    else if (c == '/') ++slashes;
    else if (!std::isdigit(static_cast<unsigned char>(c)))
      throw DomainError("bad numeric literal: " + text);
  }
  if (dots > 1 || slashes > 1 || (dots && slashes))
    throw DomainError("bad numeric literal: " + text);
  mpq_class q;
  auto slash = t.find('/');
  auto dot = t.find('.');
  if (slash != std::string::npos) {
    if (slash == 0 || slash + 1 == t.size()) throw DomainError("bad numeric literal: " + text);
    q = mpq_class(t, 10);
    q.canonicalize();
  } else if (dot != std::string::npos) {
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    if (digits.empty()) throw DomainError("bad numeric literal: " + text);
    size_t frac_len = t.size() - dot - 1;
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    q = mpq_class(num, den);
    q.canonicalize();
  } else {
    q = mpq_class(t, 10);
  }
  if (neg) q = -q;
  return from_mpq(q);
}

bool Scalar::is_zero() const {
  if (exact_) return re_ == 0 && im_ == 0;
  return fl_ == std::complex<double>(0.0, 0.0);
}

bool Scalar::is_real() const {
  return exact_ ? im_ == 0 : fl_.imag() == 0.0;
}

bool Scalar::is_integer() const {
  return exact_ && im_ == 0 && re_.get_den() == 1;
}

long Scalar::as_integer() const {
  if (!is_integer()) throw DomainError("scalar is not an exact integer");
  if (!re_.get_num().fits_slong_p()) throw DomainError("integer too large");
  return re_.get_num().get_si();
}

std::complex<double> Scalar::to_complex() const {
  if (!exact_) return fl_;
  return {re_.get_d(), im_.get_d()};
}

Scalar Scalar::operator-() const {
  if (exact_) return from_mpq(-re_, -im_);
  return Scalar(-fl_);
}

Scalar Scalar::conj() const {
  if (exact_) return from_mpq(re_, -im_);
  return Scalar(std::conj(fl_));
}

Scalar Scalar::abs2() const {
  if (exact_) return from_mpq(re_ * re_ + im_ * im_);
  return Scalar(std::complex<double>(std::norm(fl_), 0.0));
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DomainError("division by zero");
  if (exact_) {
    mpq_class n = re_ * re_ + im_ * im_;
    return from_mpq(re_ / n, -im_ / n);
  }
  return Scalar(1.0 / fl_);
}

Scalar Scalar::pow(int n) const {
  if (n == 0) return Scalar(1);
  Scalar base = n < 0 ? inverse() : *this;
  unsigned e = n < 0 ? static_cast<unsigned>(-static_cast<long>(n)) : static_cast<unsigned>(n);
  Scalar acc(1);
  while (e) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return acc;
}

namespace {

// sqrt of a nonnegative rational when numerator and denominator are
// perfect squares.
std::optional<mpq_class> rat_sqrt(const mpq_class& q) {
  if (q < 0) return std::nullopt;
  mpz_class num = q.get_num(), den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return mpq_class(rn, rd);
}

}  // namespace

std::optional<Scalar> Scalar::exact_sqrt() const {
  if (!exact_) return std::nullopt;
  if (im_ == 0) {
    if (re_ >= 0) {
      auto r = rat_sqrt(re_);
      if (r) return from_mpq(*r);
      return std::nullopt;
    }
    auto r = rat_sqrt(-re_);
    if (r) return from_mpq(mpq_class(0), *r);
    return std::nullopt;
  }
  // sqrt(a+bi) = x+yi with x^2 = (a+|z|)/2, y = b/(2x); needs |z| rational.
  mpq_class n2 = re_ * re_ + im_ * im_;
  auto mod = rat_sqrt(n2);
  if (!mod) return std::nullopt;
  mpq_class x2 = (re_ + *mod) / 2;
  auto x = rat_sqrt(x2);
  if (!x || *x == 0) return std::nullopt;
  mpq_class y = im_ / (2 * *x);
  Scalar cand = from_mpq(*x, y);
  if (cand * cand == *this) return cand;
  return std::nullopt;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return Scalar::from_mpq(a.re_ + b.re_, a.im_ + b.im_);
  return Scalar(a.to_complex() + b.to_complex());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return Scalar::from_mpq(a.re_ - b.re_, a.im_ - b.im_);
  return Scalar(a.to_complex() - b.to_complex());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_)
    return Scalar::from_mpq(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  return Scalar(a.to_complex() * b.to_complex());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return a * b.inverse();
  if (b.is_zero()) throw DomainError("division by zero");
  return Scalar(a.to_complex() / b.to_complex());
}

bool Scalar::operator==(const Scalar& o) const {
  if (exact_ && o.exact_) return re_ == o.re_ && im_ == o.im_;
  return to_complex() == o.to_complex();
}

int Scalar::compare(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) {
    int c = cmp(a.re_, b.re_);
    if (c != 0) return c;
    return cmp(a.im_, b.im_);
  }
  auto za = a.to_complex(), zb = b.to_complex();
  if (za.real() != zb.real()) return za.real() < zb.real() ? -1 : 1;
  if (za.imag() != zb.imag()) return za.imag() < zb.imag() ? -1 : 1;
  if (a.exact_ != b.exact_) return a.exact_ ? -1 : 1;
  return 0;
}

std::string Scalar::str() const {
  std::ostringstream os;
  if (exact_) {
    if (im_ == 0) {
      os << re_.get_str();
    } else if (re_ == 0) {
      os << im_.get_str() << "i";
    } else {
      os << re_.get_str() << (im_ > 0 ? "+" : "") << im_.get_str() << "i";
    }
  } else {
    os.precision(17);
    if (fl_.imag() == 0.0) {
      os << fl_.real();
    } else {
      os << fl_.real() << (fl_.imag() < 0 ? "" : "+") << fl_.imag() << "i";
    }
  }
  return os.str();
}

}  // namespace opint
