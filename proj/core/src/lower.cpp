#include "opint/lower.hpp"

#include <cmath>

namespace opint {

namespace {

// Series with a tracked pure power of x split off:  x^shift * series.
// This keeps sin(x)/x and friends exact instead of erroring on the pole.
struct ShiftedSeries {
  PowerSeries s;
  int shift;  // net power of x multiplying s
};

ShiftedSeries normalize(ShiftedSeries v) {
  // pull trailing low-order zeros of s into the shift
  int lead = 0;
  while (lead <= v.s.order() && v.s.coeff(lead).is_zero()) ++lead;
  if (lead > 0 && lead <= v.s.order()) {
    v.s = v.s.shift_degree(-lead);
    v.shift += lead;
  }
  return v;
}

ShiftedSeries lower_series_rec(const Expr& e, int order) {
  using K = Expr::Kind;
  const int n = order;
  switch (e.kind) {
    case K::number:
      return {PowerSeries::constant(e.number, n), 0};
    case K::variable:
      return {PowerSeries::constant(Scalar(1), n), 1};
    case K::parameter:
      throw ClassError("unbound parameter '" + e.name + "' (pass --param " + e.name + "=value)");
    case K::add:
    case K::sub: {
      ShiftedSeries a = lower_series_rec(e.kids[0], n);
      ShiftedSeries b = lower_series_rec(e.kids[1], n);
      // align shifts
      int sh = std::min(a.shift, b.shift);
      PowerSeries pa = a.s.shift_degree(a.shift - sh);
      PowerSeries pb = b.s.shift_degree(b.shift - sh);
      return normalize({e.kind == K::add ? pa + pb : pa - pb, sh});
    }
    case K::mul: {
      ShiftedSeries a = lower_series_rec(e.kids[0], n);
      ShiftedSeries b = lower_series_rec(e.kids[1], n);
      return normalize({a.s * b.s, a.shift + b.shift});
    }
    case K::div: {
      ShiftedSeries a = lower_series_rec(e.kids[0], n);
      ShiftedSeries b = lower_series_rec(e.kids[1], n);
      if (b.s.coeff(0).is_zero())
        throw ClassError("division by a series vanishing identically");
      return normalize({a.s * b.s.reciprocal(), a.shift - b.shift});
    }
    case K::pow: {
      const Expr& expo = e.kids[1];
      Scalar p;
      if (expo.kind == K::number) {
        p = expo.number;
      } else if (expo.kind == K::neg && expo.kids[0].kind == K::number) {
        p = -expo.kids[0].number;
      } else {
        throw ClassError("series mode supports integer exponents only");
      }
      if (!p.is_integer()) throw ClassError("series mode supports integer exponents only");
      long k = p.as_integer();
      ShiftedSeries base = lower_series_rec(e.kids[0], n);
      ShiftedSeries acc{PowerSeries::constant(Scalar(1), n), 0};
      ShiftedSeries cur = base;
      long m = k < 0 ? -k : k;
      while (m) {
        if (m & 1) acc = normalize({acc.s * cur.s, acc.shift + cur.shift});
        m >>= 1;
        if (m) cur = normalize({cur.s * cur.s, cur.shift + cur.shift});
      }
      if (k < 0) {
        if (acc.s.coeff(0).is_zero()) throw ClassError("negative power of a vanishing series");
        return normalize({acc.s.reciprocal(), -acc.shift});
      }
      return acc;
    }
    case K::neg: {
      ShiftedSeries a = lower_series_rec(e.kids[0], n);
      return {a.s.scale(Scalar(-1)), a.shift};
    }
    case K::call: {
      ShiftedSeries arg = lower_series_rec(e.kids[0], n);
      // realize the full argument series (shift folded back in)
      if (arg.shift < 0) throw ClassError(e.name + " of a singular argument at 0");
      PowerSeries g = arg.s.shift_degree(arg.shift);
      Scalar g0 = g.coeff(0);
      PowerSeries h = g - PowerSeries::constant(g0, g.order());  // vanishing part
      auto known = [&](PowerSeries::Builtin b) {
        return PowerSeries::known(b, {}, n);
      };
      if (e.name == "sin" || e.name == "cos") {
        PowerSeries sin_h = known(PowerSeries::Builtin::sin).compose(h);
        PowerSeries cos_h = known(PowerSeries::Builtin::cos).compose(h);
        if (g0.is_zero()) return normalize({e.name == "sin" ? sin_h : cos_h, 0});
        auto z = g0.to_complex();
        Scalar s0 = Scalar::complex(std::sin(z)), c0 = Scalar::complex(std::cos(z));
        if (e.name == "sin")
          return normalize({sin_h.scale(c0) + cos_h.scale(s0), 0});
        return normalize({cos_h.scale(c0) - sin_h.scale(s0), 0});
      }
      if (e.name == "exp") {
        PowerSeries exp_h = known(PowerSeries::Builtin::exp).compose(h);
        if (g0.is_zero()) return normalize({exp_h, 0});
        return normalize({exp_h.scale(Scalar::complex(std::exp(g0.to_complex()))), 0});
      }
      if (e.name == "sinc") {
        if (g0.is_zero()) {
          // sin(g)/g with g vanishing: use the sinc series composed with...
          // sinc is even in its argument only through sin(g)/g; compute as
          // series division which is exact.
          PowerSeries sin_g = known(PowerSeries::Builtin::sin).compose(h);
          ShiftedSeries num = normalize({sin_g, 0});
          ShiftedSeries den = normalize({g, 0});
          if (den.s.coeff(0).is_zero()) throw ClassError("sinc of the zero series");
          return normalize({num.s * den.s.reciprocal(), num.shift - den.shift});
        }
        PowerSeries sin_g = [&] {
          auto z = g0.to_complex();
          Scalar s0 = Scalar::complex(std::sin(z)), c0 = Scalar::complex(std::cos(z));
          PowerSeries sin_h = known(PowerSeries::Builtin::sin).compose(h);
          PowerSeries cos_h = known(PowerSeries::Builtin::cos).compose(h);
          return sin_h.scale(c0) + cos_h.scale(s0);
        }();
        return normalize({sin_g * g.reciprocal(), 0});
      }
      if (e.name == "log") {
        if (g0.is_zero()) throw ClassError("log has no series at a zero argument");
        // log(g0 (1 + h/g0)) = log g0 + log1p(h/g0)
        PowerSeries u = h.scale(g0.inverse());
        std::vector<Scalar> c(n + 1, Scalar(0));
        for (int k = 1; k <= n; ++k)
          c[k] = Scalar::rational(k % 2 == 1 ? 1 : -1, k);
        PowerSeries log1p(std::move(c));
        PowerSeries out = log1p.compose(u);
        Scalar l0 = Scalar::complex(std::log(g0.to_complex()));
        return normalize({out + PowerSeries::constant(l0, out.order()), 0});
      }
      if (e.name == "sqrt") {
        if (g0.is_zero()) throw ClassError("sqrt has no series at a zero argument");
        PowerSeries u = h.scale(g0.inverse());
        // (1+u)^{1/2} binomial series
        std::vector<Scalar> c(n + 1, Scalar(0));
        Scalar coeff(1);
        c[0] = coeff;
        for (int k = 1; k <= n; ++k) {
          coeff = coeff * (Scalar::rational(1, 2) - Scalar(k - 1)) / Scalar(k);
          c[k] = coeff;
        }
        PowerSeries root(std::move(c));
        PowerSeries out = root.compose(u);
        auto s0 = g0.exact_sqrt();
        Scalar scale = s0 ? *s0 : Scalar::complex(std::sqrt(g0.to_complex()));
        return normalize({out.scale(scale), 0});
      }
      if (e.name == "abs") {
        if (g0.is_zero())
          throw ClassError("abs has no series at 0 (kink); integrate piecewise instead");
        double sign = g0.to_complex().real() >= 0 ? 1.0 : -1.0;
        return normalize({g.scale(Scalar::real(sign)), 0});
      }
      throw ClassError("unsupported function in series mode: " + e.name);
    }
  }
  throw ClassError("bad expression node");
}

KernelIntegrand lower_kernel_rec(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::number:
      return KernelIntegrand::constant(e.number);
    case K::variable:
      return KernelIntegrand({KernelTerm{Scalar(1), 1, Scalar(0), Scalar(0)}});
    case K::parameter:
      throw ClassError("unbound parameter '" + e.name + "' (pass --param " + e.name + "=value)");
    case K::add:
      return lower_kernel_rec(e.kids[0]) + lower_kernel_rec(e.kids[1]);
    case K::sub:
      return lower_kernel_rec(e.kids[0]) + lower_kernel_rec(e.kids[1]).scale(Scalar(-1));
    case K::mul:
      return lower_kernel_rec(e.kids[0]) * lower_kernel_rec(e.kids[1]);
    case K::div: {
      KernelIntegrand num = lower_kernel_rec(e.kids[0]);
      KernelIntegrand den = lower_kernel_rec(e.kids[1]);
      if (den.terms().size() != 1)
        throw ClassError(
            "kernel mode divides by monomials only (rational integrands need the series "
            "route or a split)");
      const KernelTerm& d = den.terms()[0];
      if (!d.rate.is_zero() || !d.gauss.is_zero())
        throw ClassError("kernel mode divides by monomials only");
      std::vector<KernelTerm> t = num.terms();
      for (auto& x : t) {
        x.xpow -= d.xpow;
        x.coef = x.coef / d.coef;
      }
      return KernelIntegrand(std::move(t));
    }
    case K::pow: {
      const Expr& expo = e.kids[1];
      Scalar p;
      if (expo.kind == K::number) {
        p = expo.number;
      } else if (expo.kind == K::neg && expo.kids[0].kind == K::number) {
        p = -expo.kids[0].number;
      } else {
        throw ClassError("kernel mode supports integer exponents only");
      }
      if (!p.is_integer()) throw ClassError("kernel mode supports integer exponents only");
      long k = p.as_integer();
      KernelIntegrand base = lower_kernel_rec(e.kids[0]);
      if (k < 0) {
        if (base.terms().size() != 1 || !base.terms()[0].rate.is_zero() ||
            !base.terms()[0].gauss.is_zero())
          throw ClassError("negative powers apply to monomials only in kernel mode");
        KernelTerm t = base.terms()[0];
        return KernelIntegrand({KernelTerm{t.coef.pow(static_cast<int>(k)),
                                           static_cast<int>(k) * t.xpow, Scalar(0), Scalar(0)}});
      }
      KernelIntegrand acc = KernelIntegrand::constant(Scalar(1));
      for (long j = 0; j < k; ++j) acc = acc * base;
      return acc;
    }
    case K::neg:
      return lower_kernel_rec(e.kids[0]).scale(Scalar(-1));
    case K::call: {
      KernelIntegrand arg = lower_kernel_rec(e.kids[0]);
      // The argument must be c1 * x (+ c0) with real c1 for trig, or
      // c2 x^2 + c1 x + c0 with real(c2) <= 0 for exp.
      Scalar c0(0), c1(0), c2(0);
      for (const auto& t : arg.terms()) {
        if (!t.rate.is_zero() || !t.gauss.is_zero())
          throw ClassError(e.name + " of a non-polynomial argument is outside kernel mode");
        if (t.xpow == 0) c0 = t.coef;
        else if (t.xpow == 1) c1 = t.coef;
        else if (t.xpow == 2) c2 = t.coef;
        else throw ClassError(e.name + " argument degree too high for kernel mode");
      }
      const Scalar i = Scalar::i();
      if (e.name == "sin" || e.name == "cos" || e.name == "sinc") {
        if (!c2.is_zero()) throw ClassError(e.name + " of a quadratic is outside kernel mode");
        if (!c1.is_real() || !c0.is_real())
          throw ClassError(e.name + " needs a real linear argument in kernel mode");
        if (e.name == "sinc") {
          // sin(u)/u stays in the class only for u = c1*x (the denominator
          // must be a plain monomial) or a constant argument.
          if (c1.is_zero()) {
            if (c0.is_zero()) return KernelIntegrand::constant(Scalar(1));
            double u = c0.to_double();
            return KernelIntegrand::constant(Scalar::real(std::sin(u) / u));
          }
          if (!c0.is_zero())
            throw ClassError("sinc of a shifted argument is outside kernel mode");
        }
        // e^{i(c1 x + c0)} terms
        Scalar phase_p = Scalar::complex(std::exp((i * c0).to_complex()));
        Scalar phase_m = Scalar::complex(std::exp((-(i * c0)).to_complex()));
        if (c0.is_zero()) {
          phase_p = Scalar(1);
          phase_m = Scalar(1);
        }
        Scalar half = Scalar::rational(1, 2);
        Scalar half_i = (Scalar(2) * i).inverse();
        std::vector<KernelTerm> t;
        int shift = e.name == "sinc" ? -1 : 0;
        Scalar div = e.name == "sinc" ? c1.inverse() : Scalar(1);
        Scalar wp = (e.name == "cos") ? half : half_i;
        Scalar wm = (e.name == "cos") ? half : -half_i;
        t.push_back(KernelTerm{wp * phase_p * div, shift, i * c1, Scalar(0)});
        t.push_back(KernelTerm{wm * phase_m * div, shift, -(i * c1), Scalar(0)});
        return KernelIntegrand(std::move(t));
      }
      if (e.name == "exp") {
        if (!c2.is_zero()) {
          if (!c2.is_real() || c2.to_complex().real() > 0)
            throw ClassError("exp of a growing quadratic is outside kernel mode");
        }
        Scalar w = c0.is_zero() ? Scalar(1) : Scalar::complex(std::exp(c0.to_complex()));
        return KernelIntegrand({KernelTerm{w, 0, c1, -c2}});
      }
      throw ClassError("unsupported function in kernel mode: " + e.name);
    }
  }
  throw ClassError("bad expression node");
}

}  // namespace

PowerSeries lower_series(const Expr& e, int order) {
  ShiftedSeries v = lower_series_rec(e, order);
  if (v.shift < 0)
    throw ClassError("integrand has a pole at 0: no Maclaurin series (kernel route required)");
  return v.s.shift_degree(v.shift);
}

KernelIntegrand lower_kernel(const Expr& e) { return lower_kernel_rec(e); }

ExpPoly to_exp_poly(const KernelIntegrand& f) {
  std::vector<ExpPoly::Term> terms;
  for (const auto& t : f.terms()) {
    if (t.xpow < 0 || !t.gauss.is_zero())
      throw ClassError("not an exponential-polynomial (negative powers or Gaussian decay)");
    terms.push_back(ExpPoly::Term{t.coef, t.xpow, t.rate});
  }
  return ExpPoly(std::move(terms));
}

Expr reciprocal_substitute(const Expr& e) {
  // f(x) -> f(1/x) * x^{-2}
  std::function<Expr(const Expr&)> sub = [&](const Expr& node) -> Expr {
    if (node.kind == Expr::Kind::variable)
      return Expr::binary(Expr::Kind::div, Expr::num(Scalar(1)), Expr::var(node.name));
    Expr out = node;
    for (auto& k : out.kids) k = sub(k);
    return out;
  };
  Expr inner = sub(e);
  Expr x2 = Expr::binary(Expr::Kind::pow, Expr::var("x"), Expr::num(Scalar(2)));
  return Expr::binary(Expr::Kind::div, std::move(inner), std::move(x2));
}

}  // namespace opint
