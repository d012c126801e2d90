#include "opint/kernel_expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "opint/oracle.hpp"

namespace opint {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

mpz_class falling_factorial(int k, int j) {
  // k! / (k-j)!
  mpz_class acc(1);
  for (int i = 0; i < j; ++i) acc *= (k - i);
  return acc;
}

bool scalar_is_real(const Scalar& s) { return s.is_real(); }

}  // namespace

KernelExpr KernelExpr::constant(const Scalar& v) {
  return KernelExpr({Atom{v, 0, Scalar(0), Scalar(0), Base::one, Scalar(0), 0}});
}

KernelExpr KernelExpr::monomial(int k, const Scalar& weight) {
  return KernelExpr({Atom{weight, k, Scalar(0), Scalar(0), Base::one, Scalar(0), 0}});
}

KernelExpr KernelExpr::recip() { return monomial(-1); }

KernelExpr KernelExpr::exp_poly(const Scalar& a, int k, const Scalar& weight) {
  return KernelExpr({Atom{weight, k, a, Scalar(0), Base::one, Scalar(0), 0}});
}

KernelExpr KernelExpr::log_atom() {
  return KernelExpr({Atom{Scalar(1), 0, Scalar(0), Scalar(0), Base::log_u, Scalar(0), 0}});
}

KernelExpr KernelExpr::delta() { return delta_at(Scalar(0)); }

KernelExpr KernelExpr::delta_at(const Scalar& shift) {
  return KernelExpr({Atom{Scalar(1), 0, Scalar(0), shift, Base::delta, Scalar(0), 0}});
}

KernelExpr KernelExpr::theta_at(const Scalar& shift) {
  return KernelExpr({Atom{Scalar(1), 0, Scalar(0), shift, Base::theta, Scalar(0), 0}});
}

KernelExpr KernelExpr::gaussian_delta(const Scalar& width, const Scalar& shift) {
  if (!(width.to_complex().real() > 0) || !width.is_real())
    throw DomainError("gaussian delta needs positive real width");
  return KernelExpr({Atom{Scalar(1), 0, Scalar(0), shift, Base::delta_gauss, width, 0}});
}

KernelExpr KernelExpr::sinc_delta(const Scalar& cutoff, const Scalar& shift) {
  if (!(cutoff.to_complex().real() > 0) || !cutoff.is_real())
    throw DomainError("sinc delta needs positive real cutoff");
  return KernelExpr({Atom{Scalar(1), 0, Scalar(0), shift, Base::delta_sinc, cutoff, 0}});
}

KernelExpr KernelExpr::const_symbol(int id) {
  return KernelExpr({Atom{Scalar(1), 0, Scalar(0), Scalar(0), Base::const_symbol, Scalar(0), id}});
}

void KernelExpr::canonicalize() {
  std::vector<Atom> expanded;
  expanded.reserve(atoms_.size());
  for (Atom a : atoms_) {
    if (a.weight.is_zero()) continue;
    if (a.base == Base::delta) {
      // u^k delta(u) = 0 for k >= 1; e^{r u} delta(u) = delta(u).
      if (a.power > 0) continue;
      if (a.power < 0) throw ClassError("u^{-k} * delta(u) is not defined");
      a.rate = Scalar(0);
    }
    bool poly_like = (a.base == Base::one || a.base == Base::const_symbol);
    if (poly_like && a.rate.is_zero() && a.power > 0 && !a.shift.is_zero()) {
      // (eps - s)^k -> binomial expansion onto shift-0 monomials so that
      // like terms (e.g. shifted integration constants) cancel exactly.
      Scalar neg_s = -a.shift;
      mpz_class binom(1);
      for (int j = a.power; j >= 0; --j) {
        // binom = C(power, j)
        mpz_class bj;
        mpz_bin_uiui(bj.get_mpz_t(), a.power, j);
        Atom t = a;
        t.shift = Scalar(0);
        t.power = j;
        t.weight = a.weight * Scalar::from_mpq(mpq_class(bj)) * neg_s.pow(a.power - j);
        if (!t.weight.is_zero()) expanded.push_back(t);
      }
      continue;
    }
    if (poly_like && a.rate.is_zero() && a.power == 0) a.shift = Scalar(0);
    expanded.push_back(a);
  }

  auto key_less = [](const Atom& x, const Atom& y) {
    if (x.base != y.base) return static_cast<int>(x.base) < static_cast<int>(y.base);
    if (x.symbol_id != y.symbol_id) return x.symbol_id < y.symbol_id;
    int c = Scalar::compare(x.base_param, y.base_param);
    if (c != 0) return c < 0;
    c = Scalar::compare(x.shift, y.shift);
    if (c != 0) return c < 0;
    c = Scalar::compare(x.rate, y.rate);
    if (c != 0) return c < 0;
    return x.power < y.power;
  };
  std::sort(expanded.begin(), expanded.end(), key_less);

  std::vector<Atom> merged;
  for (const Atom& a : expanded) {
    if (!merged.empty()) {
      Atom& m = merged.back();
      bool same = m.base == a.base && m.symbol_id == a.symbol_id &&
                  m.base_param == a.base_param && m.shift == a.shift && m.rate == a.rate &&
                  m.power == a.power;
      if (same) {
        m.weight += a.weight;
        continue;
      }
    }
    merged.push_back(a);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Atom& a) { return a.weight.is_zero(); }),
               merged.end());
  atoms_ = std::move(merged);
}

KernelExpr KernelExpr::scale(const Scalar& s) const {
  std::vector<Atom> out = atoms_;
  for (auto& a : out) a.weight *= s;
  return KernelExpr(std::move(out));
}

KernelExpr operator+(const KernelExpr& a, const KernelExpr& b) {
  std::vector<KernelExpr::Atom> out = a.atoms_;
  out.insert(out.end(), b.atoms_.begin(), b.atoms_.end());
  return KernelExpr(std::move(out));
}

KernelExpr operator-(const KernelExpr& a, const KernelExpr& b) {
  return a + b.scale(Scalar(-1));
}

bool KernelExpr::operator==(const KernelExpr& o) const {
  if (atoms_.size() != o.atoms_.size()) return false;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& x = atoms_[i];
    const Atom& y = o.atoms_[i];
    if (!(x.weight == y.weight && x.power == y.power && x.rate == y.rate &&
          x.shift == y.shift && x.base == y.base && x.base_param == y.base_param &&
          x.symbol_id == y.symbol_id))
      return false;
  }
  return true;
}

KernelExpr KernelExpr::shift_by(const Scalar& a) const {
  std::vector<Atom> out = atoms_;
  for (auto& t : out) t.shift = t.shift - a;
  return KernelExpr(std::move(out));
}

KernelExpr KernelExpr::differentiate() const {
  std::vector<Atom> out;
  for (const Atom& a : atoms_) {
    // product rule on weight * u^k e^{ru} B(u)
    if (a.power != 0) {
      Atom t = a;
      t.power = a.power - 1;
      t.weight = a.weight * Scalar(a.power);
      out.push_back(t);
    }
    if (!a.rate.is_zero()) {
      Atom t = a;
      t.weight = a.weight * a.rate;
      out.push_back(t);
    }
    switch (a.base) {
      case Base::one:
      case Base::const_symbol:
        break;
      case Base::log_u: {
        Atom t = a;
        t.base = Base::one;
        t.base_param = Scalar(0);
        t.power = a.power - 1;
        out.push_back(t);
        break;
      }
      case Base::theta: {
        Atom t = a;
        t.base = Base::delta;
        t.base_param = Scalar(0);
        out.push_back(t);
        break;
      }
      case Base::delta:
        throw ClassError("derivative of delta is outside the supported atom class");
      case Base::delta_gauss: {
        Atom t = a;
        t.power = a.power + 1;
        t.weight = a.weight * Scalar(-1) / (Scalar(2) * a.base_param);
        out.push_back(t);
        break;
      }
      case Base::theta_gauss: {
        Atom t = a;
        t.base = Base::delta_gauss;
        out.push_back(t);
        break;
      }
      case Base::delta_sinc: {
        // d/du sin(Lu)/(pi u) = L cos(Lu)/(pi u) - sin(Lu)/(pi u^2)
        const Scalar L = a.base_param;
        const Scalar i = Scalar::i();
        Scalar wl = a.weight * L / Scalar(2);  // L/(2 pi) handled via pi_inv
        Scalar pi_inv = Scalar::real(1.0 / kPi);
        for (int sgn = -1; sgn <= 1; sgn += 2) {
          Atom t = a;
          t.base = Base::one;
          t.base_param = Scalar(0);
          t.rate = a.rate + Scalar(sgn) * i * L;
          t.power = a.power - 1;
          t.weight = wl * pi_inv;
          out.push_back(t);
          Atom s = t;
          s.power = a.power - 2;
          s.weight = a.weight * pi_inv * Scalar(-sgn) / (Scalar(2) * i);
          out.push_back(s);
        }
        break;
      }
      case Base::theta_sinc: {
        Atom t = a;
        t.base = Base::delta_sinc;
        out.push_back(t);
        break;
      }
      case Base::ei: {
        Atom t = a;
        t.base = Base::one;
        t.rate = a.rate + a.base_param;
        t.base_param = Scalar(0);
        t.power = a.power - 1;
        out.push_back(t);
        break;
      }
    }
  }
  return KernelExpr(std::move(out));
}

namespace {

// P(u) with  d/du [P(u) e^{ru}] = u^k e^{ru}  for r != 0, k >= 0:
// P(u) = sum_{j=0..k} (-1)^j k!/(k-j)! u^{k-j} / r^{j+1}.
std::vector<Scalar> exp_poly_antiderivative_coeffs(int k, const Scalar& r) {
  std::vector<Scalar> coeff(k + 1, Scalar(0));  // coeff[d] multiplies u^d
  Scalar rp = r.inverse();
  for (int j = 0; j <= k; ++j) {
    Scalar c = Scalar::from_mpq(mpq_class(falling_factorial(k, j))) * rp.pow(j + 1);
    if (j % 2 == 1) c = -c;
    coeff[k - j] = c;
  }
  return coeff;
}

}  // namespace

KernelExpr KernelExpr::antiderivative(const ConstantPolicy& policy, int& next_symbol) const {
  std::vector<Atom> out;

  // I_k = integral of u^k * delta_gauss_w(u), k >= 0, as atoms.
  auto gauss_moment = [](const Atom& proto, int k, const Scalar& w,
                         std::vector<Atom>& sink, const Scalar& weight) {
    // Recursion: I_k = -2w u^{k-1} G + 2w (k-1) I_{k-2};
    // I_0 = theta_gauss, I_1 = -2w G.
    std::function<void(int, const Scalar&)> rec = [&](int kk, const Scalar& wgt) {
      if (kk == 0) {
        Atom t = proto;
        t.base = Base::theta_gauss;
        t.power = 0;
        t.weight = wgt;
        sink.push_back(t);
        return;
      }
      Atom t = proto;
      t.base = Base::delta_gauss;
      t.power = kk - 1;
      t.weight = wgt * Scalar(-2) * w;
      sink.push_back(t);
      if (kk >= 2) rec(kk - 2, wgt * Scalar(2) * w * Scalar(kk - 1));
    };
    rec(k, weight);
  };

  for (const Atom& a : atoms_) {
    const int k = a.power;
    const Scalar& r = a.rate;
    switch (a.base) {
      case Base::one:
      case Base::const_symbol: {
        if (a.base == Base::const_symbol && (!r.is_zero() || k < 0))
          throw ClassError("no closed antiderivative for this constant-symbol atom");
        if (r.is_zero()) {
          if (k == -1) {
            Atom t = a;
            t.base = Base::log_u;
            t.power = 0;
            out.push_back(t);
          } else {
            Atom t = a;
            t.power = k + 1;
            t.weight = a.weight / Scalar(k + 1);
            out.push_back(t);
          }
        } else if (k >= 0) {
          auto coeff = exp_poly_antiderivative_coeffs(k, r);
          for (int d = 0; d <= k; ++d) {
            if (coeff[d].is_zero()) continue;
            Atom t = a;
            t.power = d;
            t.weight = a.weight * coeff[d];
            out.push_back(t);
          }
        } else if (k == -1) {
          // integral e^{ru}/u du = Ei(r u); supported for real r.
          if (!scalar_is_real(r)) throw ClassError("Ei atom requires a real rate");
          Atom t = a;
          t.base = Base::ei;
          t.base_param = r;
          t.rate = Scalar(0);
          t.power = 0;
          out.push_back(t);
        } else {
          // k <= -2: integrate by parts upward until k = -1.
          // integral u^k e^{ru} = u^{k+1} e^{ru}/(k+1) - r/(k+1) integral u^{k+1} e^{ru}
          KernelExpr rest({Atom{a.weight * Scalar(-1) * r / Scalar(k + 1), k + 1, r, a.shift,
                                Base::one, Scalar(0), 0}});
          int dummy = next_symbol;
          KernelExpr inner = rest.antiderivative(ConstantPolicy::zero(), dummy);
          for (const Atom& t : inner.atoms()) out.push_back(t);
          Atom t = a;
          t.power = k + 1;
          t.weight = a.weight / Scalar(k + 1);
          out.push_back(t);
        }
        break;
      }
      case Base::log_u: {
        if (!r.is_zero()) throw ClassError("no closed antiderivative for e^{ru} log u");
        if (k == -1) throw ClassError("antiderivative of log(u)/u leaves log^2 (unsupported)");
        Atom t = a;
        t.power = k + 1;
        t.weight = a.weight / Scalar(k + 1);
        out.push_back(t);
        Atom s = a;
        s.base = Base::one;
        s.power = k + 1;
        s.weight = -a.weight / (Scalar(k + 1) * Scalar(k + 1));
        out.push_back(s);
        break;
      }
      case Base::theta: {
        if (k < 0) throw ClassError("no closed antiderivative for u^{-k} Theta(u)");
        if (r.is_zero()) {
          Atom t = a;
          t.power = k + 1;
          t.weight = a.weight / Scalar(k + 1);
          out.push_back(t);
        } else {
          // Theta(u) * integral_0^u t^k e^{rt} dt = Theta*(P(u)e^{ru} - P(0))
          auto coeff = exp_poly_antiderivative_coeffs(k, r);
          for (int d = 0; d <= k; ++d) {
            if (coeff[d].is_zero()) continue;
            Atom t = a;
            t.power = d;
            t.weight = a.weight * coeff[d];
            out.push_back(t);
          }
          Atom t = a;
          t.power = 0;
          t.rate = Scalar(0);
          t.weight = -a.weight * coeff[0];
          out.push_back(t);
        }
        break;
      }
      case Base::delta: {
        if (k != 0) throw ClassError("no closed antiderivative for this delta atom");
        Atom t = a;
        t.base = Base::theta;
        out.push_back(t);
        break;
      }
      case Base::delta_gauss: {
        if (!r.is_zero()) throw ClassError("no closed antiderivative for e^{ru} * gaussian");
        if (k < 0) throw ClassError("no closed antiderivative for u^{-k} * gaussian");
        gauss_moment(a, k, a.base_param, out, a.weight);
        break;
      }
      case Base::theta_gauss: {
        if (!r.is_zero() || k < 0) throw ClassError("unsupported theta_gauss antiderivative");
        // by parts: u^{k+1}/(k+1) Theta_w - 1/(k+1) I_{k+1}
        Atom t = a;
        t.power = k + 1;
        t.weight = a.weight / Scalar(k + 1);
        out.push_back(t);
        gauss_moment(a, k + 1, a.base_param, out, -a.weight / Scalar(k + 1));
        break;
      }
      case Base::delta_sinc: {
        const Scalar L = a.base_param;
        if (!r.is_zero()) throw ClassError("unsupported sinc-delta antiderivative");
        if (k == 0) {
          Atom t = a;
          t.base = Base::theta_sinc;
          out.push_back(t);
        } else if (k > 0) {
          // u^k sin(Lu)/(pi u) = u^{k-1} sin(Lu)/pi -> elementary exp atoms.
          const Scalar i = Scalar::i();
          Scalar pi_inv = Scalar::real(1.0 / kPi);
          KernelExpr elem({
              Atom{a.weight * pi_inv / (Scalar(2) * i), k - 1, i * L, a.shift, Base::one,
                   Scalar(0), 0},
              Atom{-a.weight * pi_inv / (Scalar(2) * i), k - 1, -(i * L), a.shift, Base::one,
                   Scalar(0), 0},
          });
          int dummy = next_symbol;
          KernelExpr inner = elem.antiderivative(ConstantPolicy::zero(), dummy);
          for (const Atom& t : inner.atoms()) out.push_back(t);
        } else {
          throw ClassError("unsupported sinc-delta antiderivative");
        }
        break;
      }
      case Base::theta_sinc: {
        const Scalar L = a.base_param;
        if (!r.is_zero() || k < 0) throw ClassError("unsupported theta_sinc antiderivative");
        // integral u^k Theta_L = u^{k+1}/(k+1) Theta_L - 1/(k+1) integral u^{k+1} delta_L
        Atom t = a;
        t.power = k + 1;
        t.weight = a.weight / Scalar(k + 1);
        out.push_back(t);
        Atom d = a;
        d.base = Base::delta_sinc;
        d.power = k + 1;
        d.weight = -a.weight / Scalar(k + 1);
        KernelExpr rest({d});
        int dummy = next_symbol;
        KernelExpr inner = rest.antiderivative(ConstantPolicy::zero(), dummy);
        for (const Atom& s : inner.atoms()) out.push_back(s);
        break;
      }
      case Base::ei: {
        if (!r.is_zero() || k < 0) throw ClassError("unsupported Ei antiderivative");
        const Scalar c = a.base_param;
        // integral u^k Ei(cu) = u^{k+1}/(k+1) Ei(cu) - 1/(k+1) integral u^k e^{cu}
        Atom t = a;
        t.power = k + 1;
        t.weight = a.weight / Scalar(k + 1);
        out.push_back(t);
        KernelExpr rest({Atom{-a.weight / Scalar(k + 1), k, c, a.shift, Base::one, Scalar(0), 0}});
        int dummy = next_symbol;
        KernelExpr inner = rest.antiderivative(ConstantPolicy::zero(), dummy);
        for (const Atom& s : inner.atoms()) out.push_back(s);
        break;
      }
    }
  }

  switch (policy.mode) {
    case ConstantPolicy::Mode::zero:
      break;
    case ConstantPolicy::Mode::symbolic:
      out.push_back(Atom{Scalar(1), 0, Scalar(0), Scalar(0), Base::const_symbol, Scalar(0),
                         next_symbol++});
      break;
    case ConstantPolicy::Mode::prescribed:
      out.push_back(Atom{policy.value, 0, Scalar(0), Scalar(0), Base::one, Scalar(0), 0});
      break;
  }
  return KernelExpr(std::move(out));
}

KernelExpr KernelExpr::heat_semigroup(const Scalar& a) const {
  if (!(a.to_complex().real() > 0) || !a.is_real())
    throw DomainError("heat semigroup parameter must be positive real");
  std::vector<Atom> out;
  for (Atom t : atoms_) {
    switch (t.base) {
      case Base::delta:
        t.base = Base::delta_gauss;
        t.base_param = a;
        out.push_back(t);
        break;
      case Base::delta_gauss:
        t.base_param = t.base_param + a;
        out.push_back(t);
        break;
      case Base::theta_gauss:
        t.base_param = t.base_param + a;
        out.push_back(t);
        break;
      case Base::const_symbol:
        out.push_back(t);
        break;
      case Base::one:
        if (t.power == 0 && t.rate.is_zero()) {
          out.push_back(t);
          break;
        }
        [[fallthrough]];
      default:
        throw ClassError("heat semigroup supported on delta/gaussian atoms only");
    }
  }
  return KernelExpr(std::move(out));
}

KernelExpr KernelExpr::resolvent(const Scalar& a, bool allow_marginal) const {
  std::vector<Atom> out;
  for (const Atom& t : atoms_) {
    switch (t.base) {
      case Base::delta: {
        Atom s = t;
        s.base = Base::theta;
        s.rate = a;
        out.push_back(s);
        break;
      }
      case Base::theta: {
        const int k = t.power;
        if (k < 0) throw ClassError("resolvent on u^{-k} Theta unsupported");
        Scalar c = t.rate - a;
        if (c.is_zero()) {
          Atom s = t;
          s.power = k + 1;
          s.weight = t.weight / Scalar(k + 1);
          out.push_back(s);
        } else {
          // Theta(u) e^{au} * integral_0^u v^k e^{cv} dv
          auto coeff = exp_poly_antiderivative_coeffs(k, c);
          for (int d = 0; d <= k; ++d) {
            if (coeff[d].is_zero()) continue;
            Atom s = t;
            s.power = d;
            s.weight = t.weight * coeff[d];  // rate stays t.rate
            out.push_back(s);
          }
          Atom s = t;
          s.power = 0;
          s.rate = a;
          s.weight = -t.weight * coeff[0];
          out.push_back(s);
        }
        break;
      }
      case Base::one: {
        const int k = t.power;
        if (k < 0) throw ClassError("resolvent on u^{-k} atoms unsupported");
        Scalar c = t.rate - a;
        if (c.is_zero()) {
          if (!allow_marginal)
            throw DivergenceError(
                "resolvent Schwinger integral diverges: Re(spectral shift) must be positive");
          Atom s = t;
          s.power = k + 1;
          s.weight = t.weight / Scalar(k + 1);
          out.push_back(s);
          break;
        }
        if (!(c.to_complex().real() > 0.0) && !allow_marginal)
          throw DivergenceError(
              "resolvent Schwinger integral diverges: Re(spectral shift) must be positive");
        // (d/du - a)^{-1} u^k e^{ru} = e^{ru} sum_j (-1)^j k!/(k-j)! u^{k-j} / c^{j+1}
        for (int j = 0; j <= k; ++j) {
          Atom s = t;
          s.power = k - j;
          Scalar w = t.weight * Scalar::from_mpq(mpq_class(falling_factorial(k, j))) *
                     c.inverse().pow(j + 1);
          if (j % 2 == 1) w = -w;
          s.weight = w;
          out.push_back(s);
        }
        break;
      }
      default:
        throw ClassError("resolvent unsupported on this atom");
    }
  }
  return KernelExpr(std::move(out));
}

namespace {

struct SingularLedger {
  Scalar log_weight;                   // coefficient of ln(eps)
  std::vector<Scalar> inv_powers;      // inv_powers[k] multiplies eps^{-(k+1)}

  void add_log(const Scalar& w) { log_weight += w; }
  void add_inv(int k, const Scalar& w) {
    if (k <= 0) return;
    if (static_cast<int>(inv_powers.size()) < k) inv_powers.resize(k, Scalar(0));
    inv_powers[k - 1] += w;
  }
  void check(double scale) const {
    auto bad = [&](const Scalar& w) {
      if (w.is_exact()) return !w.is_zero();
      return w.abs() > 1e-9 * (1.0 + scale);
    };
    if (bad(log_weight))
      throw DivergenceError("limit eps->0 is logarithmically divergent");
    for (size_t k = 0; k < inv_powers.size(); ++k)
      if (bad(inv_powers[k]))
        throw DivergenceError("limit eps->0 diverges like eps^-" + std::to_string(k + 1));
  }
};

}  // namespace

Scalar KernelExpr::eval_at(const Scalar& eps, Side side) const {
  Scalar total(0);
  for (const Atom& a : atoms_) {
    Scalar u = eps - a.shift;
    Scalar v = a.weight;
    if (a.power != 0) {
      if (u.is_zero()) {
        if (a.power < 0) throw DivergenceError("pole at evaluation point");
        continue;  // u^k (k>0) kills every base factor that is finite there
      }
      v *= u.pow(a.power);
    }
    if (!a.rate.is_zero() && !u.is_zero()) {
      Scalar ru = a.rate * u;
      v *= Scalar::complex(std::exp(ru.to_complex()));
    }
    switch (a.base) {
      case Base::one:
        break;
      case Base::log_u:
        if (u.is_zero()) throw DivergenceError("log singular at evaluation point");
        v *= Scalar::complex(std::log(u.to_complex()));
        break;
      case Base::theta: {
        if (!u.is_real()) throw DomainError("Theta of a non-real argument");
        if (u.is_zero()) {
          if (side == Side::plus) { /* Theta(0+)=1 */
          } else if (side == Side::minus) {
            v = Scalar(0);
          } else {
            throw DomainError("Theta(0) requires a one-sided limit");
          }
        } else if (u.to_complex().real() < 0) {
          v = Scalar(0);
        }
        break;
      }
      case Base::delta:
        if (u.is_zero()) throw DivergenceError("delta evaluated at its support");
        v = Scalar(0);
        break;
      case Base::delta_gauss: {
        double w = a.base_param.to_double();
        auto z = u.to_complex();
        v *= Scalar::complex(std::exp(-z * z / (4.0 * w)) / std::sqrt(4.0 * kPi * w));
        break;
      }
      case Base::theta_gauss: {
        if (!u.is_real()) throw DomainError("regularized Theta of non-real argument");
        double w = a.base_param.to_double();
        v *= Scalar::real(0.5 * (1.0 + std::erf(u.to_double() / (2.0 * std::sqrt(w)))));
        break;
      }
      case Base::delta_sinc: {
        double L = a.base_param.to_double();
        if (u.is_zero()) {
          v *= Scalar::real(L / kPi);
        } else {
          auto z = u.to_complex();
          v *= Scalar::complex(std::sin(L * z) / (kPi * z));
        }
        break;
      }
      case Base::theta_sinc: {
        if (!u.is_real()) throw DomainError("regularized Theta of non-real argument");
        double L = a.base_param.to_double();
        v *= Scalar::real(0.5 + oracle::si(L * u.to_double()) / kPi);
        break;
      }
      case Base::ei: {
        Scalar arg = a.base_param * u;
        if (!arg.is_real()) throw DomainError("Ei of a non-real argument");
        if (arg.is_zero()) throw DivergenceError("Ei singular at 0");
        v *= Scalar::real(oracle::ei(arg.to_double()));
        break;
      }
      case Base::const_symbol:
        throw ConstantError(
            "non-cancelling integration constant: a pole prescription is required");
    }
    total += v;
  }
  return total;
}

Scalar KernelExpr::limit_at_zero(Side side) const {
  Scalar total(0);
  SingularLedger ledger;
  double scale = 0.0;
  for (const Atom& a : atoms_) scale += a.weight.abs();

  for (const Atom& a : atoms_) {
    if (a.base == Base::const_symbol)
      throw ConstantError(
          "non-cancelling integration constant: a pole prescription is required");
    if (!a.shift.is_zero()) {
      // Regular point: delegate to pointwise evaluation of this atom.
      KernelExpr single({a});
      total += single.eval_at(Scalar(0), side);
      continue;
    }
    // shift == 0: u = eps -> 0.
    switch (a.base) {
      case Base::one: {
        if (a.power > 0) break;  // -> 0
        if (a.power == 0) {
          total += a.weight;  // e^{r eps} -> 1
          break;
        }
        // u^k e^{ru}, k<0: expand the exponential.
        int m = -a.power;
        Scalar term(1);
        mpz_class fact(1);
        for (int j = 0; j <= m; ++j) {
          if (j > 0) {
            fact *= j;
            term = a.rate.pow(j) * Scalar::from_mpq(mpq_class(1, fact));
          } else {
            term = Scalar(1);
          }
          Scalar contrib = a.weight * term;
          if (j < m)
            ledger.add_inv(m - j, contrib);
          else
            total += contrib;
        }
        break;
      }
      case Base::log_u: {
        if (a.power > 0) break;  // u^k ln u -> 0
        if (a.power < 0) throw DivergenceError("u^{-k} log(u) divergence at 0");
        ledger.add_log(a.weight);
        if (side == Side::minus)
          throw DomainError("log limit from the left not supported");
        break;
      }
      case Base::theta: {
        if (a.power > 0) break;  // u^k Theta(u) -> 0 from both sides
        if (a.power < 0) throw DivergenceError("u^{-k} Theta divergence at 0");
        if (side == Side::none)
          throw DomainError("Theta(0) requires a one-sided limit");
        if (side == Side::plus) total += a.weight;
        break;
      }
      case Base::delta:
        throw DivergenceError("delta evaluated at its support");
      case Base::delta_gauss:
      case Base::theta_gauss:
      case Base::delta_sinc:
      case Base::theta_sinc: {
        KernelExpr single({a});
        total += single.eval_at(Scalar(0), side);
        break;
      }
      case Base::ei: {
        if (a.power != 0) {
          if (a.power > 0) break;  // u^k Ei -> 0
          throw DivergenceError("u^{-k} Ei divergence at 0");
        }
        // Ei(c eps) ~ ln|eps| + gamma + ln|c|.
        ledger.add_log(a.weight);
        double c = a.base_param.to_double();
        if (c == 0.0) throw DomainError("Ei with zero inner scale");
        total += a.weight * Scalar::real(kEulerGamma + std::log(std::abs(c)));
        break;
      }
      case Base::const_symbol:
        break;  // handled above
    }
  }
  ledger.check(scale);
  return total;
}

bool KernelExpr::has_symbolic_constant() const {
  for (const Atom& a : atoms_)
    if (a.base == Base::const_symbol) return true;
  return false;
}

std::string KernelExpr::str(const std::string& var) const {
  if (atoms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Atom& a : atoms_) {
    if (!first) os << " + ";
    first = false;
    os << a.weight.str();
    std::string u = var;
    if (!a.shift.is_zero()) u = "(" + var + "-(" + a.shift.str() + "))";
    if (a.power != 0) os << "*" << u << "^" << a.power;
    if (!a.rate.is_zero()) os << "*exp(" << a.rate.str() << "*" << u << ")";
    switch (a.base) {
      case Base::one:
        break;
      case Base::log_u:
        os << "*log(" << u << ")";
        break;
      case Base::theta:
        os << "*Theta(" << u << ")";
        break;
      case Base::delta:
        os << "*delta(" << u << ")";
        break;
      case Base::delta_gauss:
        os << "*delta_gauss[" << a.base_param.str() << "](" << u << ")";
        break;
      case Base::theta_gauss:
        os << "*Theta_gauss[" << a.base_param.str() << "](" << u << ")";
        break;
      case Base::delta_sinc:
        os << "*delta_sinc[" << a.base_param.str() << "](" << u << ")";
        break;
      case Base::theta_sinc:
        os << "*Theta_sinc[" << a.base_param.str() << "](" << u << ")";
        break;
      case Base::ei:
        os << "*Ei(" << a.base_param.str() << "*" << u << ")";
        break;
      case Base::const_symbol:
        os << "*c" << a.symbol_id;
        break;
    }
  }
  return os.str();
}

}  // namespace opint
