#include "opint/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace opint {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

mpz_class factorial(int n) {
  mpz_class f(1);
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Best rational approximation with bounded denominator (continued
// fractions); used to snap numeric roots back onto exact values.
std::optional<mpq_class> rational_snap(double x, long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  mpq_class lo(0), hi(0);
  bool neg = x < 0;
  double v = std::abs(x);
  long a0 = static_cast<long>(std::floor(v));
  double frac = v - a0;
  mpq_class h1(a0), h0(1), k1(1), k0(0);
  double f = frac;
  for (int iter = 0; iter < 64 && f > 1e-15; ++iter) {
    double inv = 1.0 / f;
    long a = static_cast<long>(std::floor(inv));
    f = inv - a;
    mpq_class h2 = a * h1 + h0;
    mpq_class k2 = a * k1 + k0;
    if (k2.get_num() > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  mpq_class q = h1 / k1;
  if (neg) q = -q;
  q.canonicalize();
  if (std::abs(q.get_d() - x) > 1e-9 * (1.0 + std::abs(x))) return std::nullopt;
  return q;
}

std::optional<Scalar> snap_root(const Polynomial& p, std::complex<double> z) {
  auto re = rational_snap(z.real(), 1000000);
  auto im = rational_snap(z.imag(), 1000000);
  if (!re || !im) return std::nullopt;
  Scalar cand = Scalar::from_mpq(*re, *im);
  if (p.eval(cand).is_zero()) return cand;
  return std::nullopt;
}

std::vector<std::complex<double>> durand_kerner(std::vector<std::complex<double>> c) {
  // c: monic coefficients ascending, degree n
  int n = static_cast<int>(c.size()) - 1;
  std::vector<std::complex<double>> r(n);
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> p = 1.0;
  for (int k = 0; k < n; ++k) {
    p *= seed;
    r[k] = p;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> acc = 0.0;
    for (int k = n; k >= 0; --k) acc = acc * x + c[k];
    return acc;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0.0;
    for (int k = 0; k < n; ++k) {
      std::complex<double> den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != k) den *= (r[k] - r[j]);
      std::complex<double> step = eval(r[k]) / den;
      r[k] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-15) break;
  }
  // Newton polish
  for (int k = 0; k < n; ++k) {
    for (int it = 0; it < 4; ++it) {
      std::complex<double> f = eval(r[k]);
      std::complex<double> df = 0.0;
      for (int j = n; j >= 1; --j) df = df * r[k] + c[j] * static_cast<double>(j);
      if (std::abs(df) == 0.0) break;
      r[k] -= f / df;
    }
  }
  return r;
}

// Distinct roots of a polynomial whose roots are simple.
std::vector<Scalar> simple_roots(const Polynomial& p) {
  int deg = p.degree();
  if (deg <= 0) return {};
  if (deg == 1) return {-(p.coeff(0) / p.coeff(1))};
  if (deg == 2) {
    Scalar a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
    Scalar disc = b * b - Scalar(4) * a * c;
    auto s = disc.exact_sqrt();
    if (s) {
      Scalar two_a = Scalar(2) * a;
      return {(-b + *s) / two_a, (-b - *s) / two_a};
    }
    auto zd = std::sqrt(disc.to_complex());
    auto za = a.to_complex(), zb = b.to_complex();
    return {Scalar::complex((-zb + zd) / (2.0 * za)), Scalar::complex((-zb - zd) / (2.0 * za))};
  }
  // numeric: Durand-Kerner on the monic normalization
  std::vector<std::complex<double>> mono(deg + 1);
  auto lead = p.leading().to_complex();
  for (int k = 0; k <= deg; ++k) mono[k] = p.coeff(k).to_complex() / lead;
  auto rts = durand_kerner(mono);
  double norm = 0.0;
  for (int k = 0; k <= deg; ++k) norm = std::max(norm, p.coeff(k).abs());
  std::vector<Scalar> out;
  for (auto z : rts) {
    if (auto exact = snap_root(p, z)) {
      out.push_back(*exact);
      continue;
    }
    double resid = std::abs(p.eval(Scalar::complex(z)).to_complex());
    if (resid > 1e-12 * norm)
      throw ConvergenceError("polynomial root residual too large: |p(root)| = " +
                             std::to_string(resid));
    out.push_back(Scalar::complex(z));
  }
  return out;
}

}  // namespace

std::vector<RationalFunction::Factor> polynomial_roots(const Polynomial& p) {
  if (p.is_zero()) throw DomainError("roots of the zero polynomial");
  if (p.degree() == 0) return {};
  if (p.is_exact()) {
    // Square-free multiplicity extraction through the gcd chain.
    Polynomial g = Polynomial::gcd(p, p.derivative());
    if (g.degree() <= 0) {
      std::vector<RationalFunction::Factor> out;
      for (const Scalar& r : simple_roots(p)) out.push_back({r, 1});
      return out;
    }
    Polynomial w, rem;
    Polynomial::divmod(p, g, w, rem);  // w carries each distinct root once
    auto inner = polynomial_roots(g);
    std::vector<RationalFunction::Factor> out;
    for (const Scalar& r : simple_roots(w)) {
      int mult = 1;
      for (const auto& f : inner) {
        bool same = f.root.is_exact() && r.is_exact()
                        ? f.root == r
                        : std::abs((f.root.to_complex() - r.to_complex())) < 1e-8;
        if (same) mult += f.multiplicity;
      }
      out.push_back({r, mult});
    }
    return out;
  }
  std::vector<RationalFunction::Factor> out;
  for (const Scalar& r : simple_roots(p)) out.push_back({r, 1});
  return out;
}

// ---------------------------------------------------------------------------
// RationalFunction
// ---------------------------------------------------------------------------

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den,
                                   std::vector<Factor> known_factors)
    : num_(std::move(num)), den_(std::move(den)), factors_(std::move(known_factors)) {
  normalize();
}

void RationalFunction::normalize() {
  if (den_.is_zero()) throw DomainError("rational function with zero denominator");
  if (num_.is_zero()) return;
  if (num_.is_exact() && den_.is_exact()) {
    Polynomial g = Polynomial::gcd(num_, den_);
    if (g.degree() > 0) {
      Polynomial q, r;
      Polynomial::divmod(num_, g, q, r);
      num_ = q;
      Polynomial::divmod(den_, g, q, r);
      den_ = q;
      factors_.reset();  // cancellation may have removed known poles
    }
  }
}

Scalar RationalFunction::eval(const Scalar& x) const {
  Scalar d = den_.eval(x);
  if (d.is_zero()) throw DomainError("evaluation at a pole");
  return num_.eval(x) / d;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

bool RationalFunction::equivalent(const RationalFunction& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

std::string RationalFunction::str(const std::string& var) const {
  return "(" + num_.str(var) + ") / (" + den_.str(var) + ")";
}

// ---------------------------------------------------------------------------
// ExpPoly
// ---------------------------------------------------------------------------

void ExpPoly::merge() {
  for (const Term& t : terms_)
    if (t.power < 0) throw DomainError("ExpPoly powers must be nonnegative");
  auto less = [](const Term& a, const Term& b) {
    int c = Scalar::compare(a.rate, b.rate);
    if (c != 0) return c < 0;
    return a.power < b.power;
  };
  std::sort(terms_.begin(), terms_.end(), less);
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (t.weight.is_zero()) continue;
    if (!out.empty() && out.back().power == t.power && out.back().rate == t.rate) {
      out.back().weight += t.weight;
      continue;
    }
    out.push_back(t);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Term& t) { return t.weight.is_zero(); }),
            out.end());
  terms_ = std::move(out);
}

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) {
  std::vector<ExpPoly::Term> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return ExpPoly(std::move(t));
}

ExpPoly operator-(const ExpPoly& a, const ExpPoly& b) { return a + b.scale(Scalar(-1)); }

ExpPoly ExpPoly::scale(const Scalar& s) const {
  std::vector<Term> t = terms_;
  for (auto& x : t) x.weight *= s;
  return ExpPoly(std::move(t));
}

bool ExpPoly::operator==(const ExpPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t k = 0; k < terms_.size(); ++k)
    if (!(terms_[k].weight == o.terms_[k].weight && terms_[k].power == o.terms_[k].power &&
          terms_[k].rate == o.terms_[k].rate))
      return false;
  return true;
}

Scalar ExpPoly::eval(const Scalar& x) const {
  Scalar acc(0);
  for (const Term& t : terms_) {
    Scalar v = t.weight;
    if (t.power > 0) v *= x.pow(t.power);
    Scalar rx = t.rate * x;
    if (!rx.is_zero()) v *= Scalar::complex(std::exp(rx.to_complex()));
    acc += v;
  }
  return acc;
}

double ExpPoly::max_difference(const ExpPoly& o, double hi, int samples) const {
  double worst = 0.0;
  for (int k = 1; k <= samples; ++k) {
    Scalar x = Scalar::real(hi * k / samples);
    worst = std::max(worst, (eval(x) - o.eval(x)).abs());
  }
  return worst;
}

std::string ExpPoly::str(const std::string& var) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) os << " + ";
    first = false;
    bool unit_weight = t.weight == Scalar(1);
    bool printed = false;
    if (!unit_weight || (t.power == 0 && t.rate.is_zero())) {
      os << t.weight.str();
      printed = true;
    }
    if (t.power > 0) {
      if (printed) os << "*";
      os << var;
      if (t.power > 1) os << "^" << t.power;
      printed = true;
    }
    if (!t.rate.is_zero()) {
      if (printed) os << "*";
      os << "exp(" << t.rate.str() << "*" << var << ")";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Laplace transforms
// ---------------------------------------------------------------------------

RationalFunction laplace_forward_rational(const ExpPoly& f) {
  if (f.empty()) return RationalFunction(Polynomial(), Polynomial::constant(Scalar(1)));
  // Collect poles: rate a with multiplicity max(k)+1.
  std::vector<RationalFunction::Factor> poles;
  for (const auto& t : f.terms()) {
    bool found = false;
    for (auto& p : poles)
      if (p.root == t.rate) {
        p.multiplicity = std::max(p.multiplicity, t.power + 1);
        found = true;
      }
    if (!found) poles.push_back({t.rate, t.power + 1});
  }
  Polynomial den = Polynomial::constant(Scalar(1));
  for (const auto& p : poles) {
    Polynomial lin = Polynomial::linear_root(p.root);
    for (int j = 0; j < p.multiplicity; ++j) den = den * lin;
  }
  Polynomial num;
  for (const auto& t : f.terms()) {
    // w k! / (x-a)^{k+1} -> w k! * den / (x-a)^{k+1}
    Polynomial part = Polynomial::constant(t.weight * Scalar::from_mpq(mpq_class(factorial(t.power))));
    for (const auto& p : poles) {
      int pow = p.multiplicity - (p.root == t.rate ? t.power + 1 : 0);
      Polynomial lin = Polynomial::linear_root(p.root);
      for (int j = 0; j < pow; ++j) part = part * lin;
    }
    num = num + part;
  }
  return RationalFunction(std::move(num), std::move(den), std::move(poles));
}

KernelExpr laplace_forward_symbolic(const ExpPoly& f) {
  std::vector<KernelExpr::Atom> atoms;
  for (const auto& t : f.terms()) {
    KernelExpr::Atom a;
    a.weight = t.weight * Scalar::from_mpq(mpq_class(factorial(t.power)));
    a.power = -(t.power + 1);
    a.rate = Scalar(0);
    a.shift = t.rate;
    a.base = KernelExpr::Base::one;
    atoms.push_back(a);
  }
  return KernelExpr(std::move(atoms));
}

Scalar laplace_forward_at(const ExpPoly& f, const Scalar& x) {
  if (!x.is_real()) throw DomainError("Laplace evaluation point must be real");
  for (const auto& t : f.terms())
    if (!(x.to_double() > t.rate.to_complex().real()))
      throw DomainError("evaluation outside the region of convergence (x <= Re(rate))");
  Scalar acc(0);
  for (const auto& t : f.terms()) {
    Scalar d = (x - t.rate).pow(t.power + 1);
    acc += t.weight * Scalar::from_mpq(mpq_class(factorial(t.power))) / d;
  }
  return acc;
}

AsymptoticValue laplace_forward_series_at(const PowerSeries& f, const Scalar& x) {
  if (!x.is_real() || !(x.to_double() > 0))
    throw DomainError("asymptotic Laplace evaluation needs x > 0");
  AsymptoticValue out;
  out.value = Scalar(0);
  double prev = std::numeric_limits<double>::infinity();
  mpz_class fact(1);
  Scalar xp = x.inverse();  // 1/x^{n+1}
  for (int n = 0; n <= f.order(); ++n) {
    if (n > 0) {
      fact *= n;
      xp = xp / x;
    }
    Scalar term = f.coeff(n) * Scalar::from_mpq(mpq_class(fact)) * xp;
    double mag = term.abs();
    if (mag > prev) {
      out.first_dropped = mag;
      break;
    }
    out.value += term;
    out.terms_used = n + 1;
    if (mag > 0) prev = mag;
  }
  return out;
}

ExpPoly laplace_inverse_rational(const RationalFunction& r, int max_pole_order) {
  if (!r.proper())
    throw DomainError(
        "inverse transform requires a proper rational function (the polynomial part "
        "would produce delta derivatives)");
  std::vector<RationalFunction::Factor> poles;
  if (r.known_factors()) {
    poles = *r.known_factors();
  } else {
    poles = polynomial_roots(r.den());
  }
  for (const auto& p : poles)
    if (p.multiplicity > max_pole_order)
      throw DomainError("pole order " + std::to_string(p.multiplicity) +
                        " exceeds the configured cap " + std::to_string(max_pole_order));

  std::vector<ExpPoly::Term> terms;
  for (const auto& pole : poles) {
    int m = pole.multiplicity;
    // q(x) = den / (x - p)^m, exact synthetic division
    Polynomial q = r.den();
    for (int j = 0; j < m; ++j) {
      Polynomial quot, rem;
      Polynomial::divmod(q, Polynomial::linear_root(pole.root), quot, rem);
      q = quot;
    }
    // Taylor coefficients of num/q at the pole, orders 0..m-1
    Polynomial num_s = r.num().shifted_to(pole.root);
    Polynomial q_s = q.shifted_to(pole.root);
    std::vector<Scalar> phi(m, Scalar(0));
    Scalar q0 = q_s.coeff(0);
    if (q0.is_zero()) throw DomainError("inconsistent pole multiplicity");
    for (int j = 0; j < m; ++j) {
      Scalar acc = num_s.coeff(j);
      for (int i = 1; i <= j; ++i) acc -= q_s.coeff(i) * phi[j - i];
      phi[j] = acc / q0;
    }
    // A_j / (x-p)^{m-j}  ->  resolvent applied (m-j) times to delta
    for (int j = 0; j < m; ++j) {
      if (phi[j].is_zero()) continue;
      int order = m - j;
      KernelExpr acc = KernelExpr::delta();
      for (int it = 0; it < order; ++it) acc = acc.resolvent(pole.root, true);
      for (const auto& atom : acc.atoms()) {
        if (atom.base != KernelExpr::Base::theta)
          throw ClassError("unexpected atom from the resolvent chain");
        terms.push_back(ExpPoly::Term{phi[j] * atom.weight, atom.power, atom.rate});
      }
    }
  }
  return ExpPoly(std::move(terms));
}

double laplace_roundtrip_check(const ExpPoly& f, double tol) {
  RationalFunction image = laplace_forward_rational(f);
  ExpPoly back = laplace_inverse_rational(image);
  ExpPoly diff = f - back;
  if (diff.empty()) return 0.0;
  double err = diff.max_difference(ExpPoly(), 10.0, 50);
  if (err > tol)
    throw ConvergenceError("Laplace round trip failed: max error " + std::to_string(err));
  return err;
}

// ---------------------------------------------------------------------------
// Heat trace and spectrum
// ---------------------------------------------------------------------------

void SpectralComb::canonicalize() {
  for (const auto& l : lines_) {
    if (!l.rate.is_real() || !(l.rate.to_double() > 0))
      throw DomainError("spectral lines need positive real rates");
    if (!l.weight.is_real() || !(l.weight.to_double() > 0))
      throw DomainError("spectral lines need positive real weights");
  }
  std::sort(lines_.begin(), lines_.end(), [](const Line& a, const Line& b) {
    return Scalar::compare(a.rate, b.rate) < 0;
  });
  std::vector<Line> out;
  for (const Line& l : lines_) {
    if (!out.empty() && out.back().rate == l.rate) {
      out.back().weight += l.weight;
      continue;
    }
    out.push_back(l);
  }
  lines_ = std::move(out);
}

bool SpectralComb::operator==(const SpectralComb& o) const {
  if (lines_.size() != o.lines_.size()) return false;
  for (size_t k = 0; k < lines_.size(); ++k)
    if (!(lines_[k].rate == o.lines_[k].rate && lines_[k].weight == o.lines_[k].weight))
      return false;
  return true;
}

double heat_trace(const SpectralComb& spec, double t) {
  if (!(t > 0)) throw DomainError("heat trace needs t > 0");
  if (spec.lines().empty()) return 0.0;
  double lmin = spec.lines().front().rate.to_double();
  double acc = 0.0;
  for (const auto& l : spec.lines())
    acc += l.weight.to_double() * std::exp(-(l.rate.to_double() - lmin) * t);
  return std::exp(-lmin * t) * acc;
}

ExpPoly heat_trace_exppoly(const SpectralComb& spec) {
  std::vector<ExpPoly::Term> terms;
  for (const auto& l : spec.lines()) terms.push_back({l.weight, 0, -l.rate});
  return ExpPoly(std::move(terms));
}

SpectralComb spectrum_recover(const ExpPoly& trace) {
  std::vector<SpectralComb::Line> lines;
  for (const auto& t : trace.terms()) {
    if (t.power != 0)
      throw DomainError("spectrum recovery needs a pure-exponential trace (power > 0 term)");
    if (!t.rate.is_real() || !(t.rate.to_complex().real() < 0))
      throw DomainError("spectrum recovery needs negative real rates");
    // e^{-lambda d} delta(eps) = delta(eps - lambda): the shift is the line.
    KernelExpr shifted = KernelExpr::delta().shift_by(t.rate);
    lines.push_back({shifted.atoms().at(0).shift, t.weight});
  }
  return SpectralComb(std::move(lines));
}

std::vector<double> comb_render(const SpectralComb& spec, const CombRenderScheme& reg,
                                const std::vector<double>& grid) {
  if (!(reg.width > 0)) throw DomainError("render width must be positive");
  std::vector<double> out(grid.size(), 0.0);
  for (size_t i = 0; i < grid.size(); ++i) {
    double acc = 0.0;
    for (const auto& l : spec.lines()) {
      double d = grid[i] - l.rate.to_double();
      double w = l.weight.to_double();
      if (reg.shape == CombRenderScheme::Shape::gaussian) {
        acc += w * std::exp(-d * d / (4.0 * reg.width)) / std::sqrt(4.0 * kPi * reg.width);
      } else {
        acc += w * (d == 0.0 ? reg.width / kPi : std::sin(reg.width * d) / (kPi * d));
      }
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace opint
