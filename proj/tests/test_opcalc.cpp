#include <doctest.h>

#include <cmath>
#include <random>

#include "opint/integrate.hpp"
#include "opint/kernel_expr.hpp"
#include "opint/operators.hpp"
#include "opint/oracle.hpp"

using namespace opint;
using B = PowerSeries::Builtin;
using Side = KernelExpr::Side;

TEST_CASE("eigenfunction rule") {
  // f(y)=y^2, nu=+1, a=3 -> (9, e^{3 eps})
  auto r = apply_to_exponential(DiffOperator::from_series(PowerSeries::monomial(2, 2)), Scalar(3));
  CHECK(r.factor == Scalar(9));
  CHECK(r.factor.is_exact());
  CHECK(r.kernel == KernelExpr::exp_poly(Scalar(3)));

  // f=sin, nu=-i, a=i -> sin((-i)(i)) = sin(1)
  auto s = apply_to_exponential(DiffOperator::from_builtin(B::sin, Nu::minus_i), Scalar::i());
  CHECK(std::abs(s.factor.to_complex().real() - 0.8414709848) < 1e-9);
  CHECK(std::abs(s.factor.to_complex().real() - std::sin(1.0)) < 1e-12);

  // the identity operator fixes every exponential
  auto one = apply_to_exponential(
      DiffOperator::from_series(PowerSeries::constant(Scalar(1), 4), Nu::plus_i), Scalar(-7));
  CHECK(one.factor == Scalar(1));

  // pole of the symbol
  CHECK_THROWS_AS(apply_to_exponential(
                      DiffOperator::from_builtin(B::geometric_1_over_1_plus_x2), Scalar::i()),
                  Error);
}

TEST_CASE("exact shifts on every atom") {
  CHECK(KernelExpr::theta_at(Scalar(0)).shift_by(Scalar(1)) ==
        KernelExpr::theta_at(Scalar(-1)));  // Theta(eps+1)
  CHECK(KernelExpr::log_atom().shift_by(-Scalar::i()).atoms()[0].shift == Scalar::i());
  auto g = KernelExpr::exp_poly(Scalar(2), 3) + KernelExpr::recip();
  CHECK(g.shift_by(Scalar(0)) == g);
}

TEST_CASE("shift group law holds exactly for random shifts") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> n(-6, 6), d(1, 4);
  std::vector<KernelExpr> pool = {
      KernelExpr::theta_at(Scalar(2)), KernelExpr::log_atom(), KernelExpr::recip(),
      KernelExpr::delta(), KernelExpr::gaussian_delta(Scalar::rational(1, 2)),
      KernelExpr::exp_poly(Scalar(-1), 2)};
  for (int it = 0; it < 40; ++it) {
    Scalar a = Scalar::rational(n(rng), d(rng));
    Scalar b = Scalar::rational(n(rng), d(rng));
    const KernelExpr& g = pool[it % pool.size()];
    CHECK(g.shift_by(b).shift_by(a) == g.shift_by(a + b));
  }
}

TEST_CASE("antiderivatives with the constant policy") {
  int sym = 0;
  auto log_c = KernelExpr::recip().antiderivative(ConstantPolicy::symbolic(), sym);
  CHECK(log_c.has_symbolic_constant());
  bool saw_log = false;
  for (const auto& a : log_c.atoms())
    if (a.base == KernelExpr::Base::log_u) saw_log = true;
  CHECK(saw_log);

  auto theta_c = KernelExpr::delta().antiderivative(ConstantPolicy::symbolic(), sym);
  bool saw_theta = false;
  for (const auto& a : theta_c.atoms())
    if (a.base == KernelExpr::Base::theta) saw_theta = true;
  CHECK(saw_theta);
  CHECK(theta_c.has_symbolic_constant());

  auto e2 = KernelExpr::exp_poly(Scalar(2)).antiderivative(ConstantPolicy::zero(), sym);
  CHECK(e2 == KernelExpr::exp_poly(Scalar(2)).scale(Scalar::rational(1, 2)));
}

TEST_CASE("differentiation inverts the antiderivative on atoms") {
  int sym = 0;
  std::vector<KernelExpr> pool = {
      KernelExpr::recip(),
      KernelExpr::monomial(3),
      KernelExpr::exp_poly(Scalar(-2), 2),
      KernelExpr::theta_at(Scalar(1)),
      KernelExpr::gaussian_delta(Scalar::rational(1, 3)),
      KernelExpr::exp_poly(Scalar(1), 0, Scalar::rational(2, 5)),
  };
  for (const auto& g : pool) {
    auto anti = g.antiderivative(ConstantPolicy::zero(), sym);
    CHECK(anti.differentiate() == g);
  }
}

TEST_CASE("resolvent: Schwinger representation in closed form") {
  auto r = KernelExpr::delta().resolvent(Scalar(2));
  KernelExpr want({KernelExpr::Atom{Scalar(1), 0, Scalar(2), Scalar(0),
                                    KernelExpr::Base::theta, Scalar(0), 0}});
  CHECK(r == want);

  CHECK(KernelExpr::delta().resolvent(Scalar(0)) == KernelExpr::theta_at(Scalar(0)));

  // (d-a)^{-1} e^{-2x} Theta(x) at a=-1, evaluated at x=1, against the
  // oracle's value of the defining integral  int_0^1 e^{-w} e^{-2(1-w)} dw.
  KernelExpr g({KernelExpr::Atom{Scalar(1), 0, Scalar(-2), Scalar(0),
                                 KernelExpr::Base::theta, Scalar(0), 0}});
  auto res = g.resolvent(Scalar(-1));
  double mine = res.eval_at(Scalar(1)).to_complex().real();
  auto orc = oracle::quad_finite(
      [](double w) { return std::exp(-w) * std::exp(-2.0 * (1.0 - w)); }, 0, 1, 1e-12);
  CHECK(std::abs(mine - orc.value) < 1e-12);
  CHECK(std::abs(mine - 0.2325441579) < 1e-9);

  // divergent Schwinger integral (Re of the spectral shift negative) is refused
  CHECK_THROWS_AS(KernelExpr::exp_poly(Scalar(1)).resolvent(Scalar(3)), DivergenceError);
  // ... but converges the other way round: (d-1)^{-1} e^{3u} = e^{3u}/2
  CHECK(KernelExpr::exp_poly(Scalar(3)).resolvent(Scalar(1)) ==
        KernelExpr::exp_poly(Scalar(3)).scale(Scalar::rational(1, 2)));
}

TEST_CASE("series-level operator application") {
  // f(y) = y applied to eps gives 1
  auto d = apply_series_operator(DiffOperator::from_series(PowerSeries::monomial(1, 1)),
                                 PowerSeries::monomial(1, 8));
  CHECK(d.coeff(0) == Scalar(1));
  for (int k = 1; k <= d.order(); ++k) CHECK(d.coeff(k) == Scalar(0));

  // e^{d} applied to eps^2 = (eps+1)^2
  auto sh = apply_series_operator(DiffOperator::from_builtin(B::exp),
                                  PowerSeries::monomial(2, 10));
  CHECK(sh.coeff(0) == Scalar(1));
  CHECK(sh.coeff(1) == Scalar(2));
  CHECK(sh.coeff(2) == Scalar(1));

  // an explicit series symbol longer than the target has no overlap
  CHECK_THROWS_AS(apply_series_operator(
                      DiffOperator::from_series(PowerSeries::known(B::exp, {}, 8)),
                      PowerSeries::monomial(1, 3)),
                  Error);
}

TEST_CASE("series application at 0 matches the eigenfunction rule") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> c(-3, 3);
  for (Nu nu : {Nu::plus_one, Nu::minus_one, Nu::plus_i, Nu::minus_i}) {
    // polynomial f (degree 4, carried with slack order): exact agreement
    std::vector<Scalar> fc(13, Scalar(0));
    for (int k = 0; k <= 4; ++k) fc[k] = Scalar(c(rng));
    PowerSeries f(fc);
    Scalar a = Scalar::rational(c(rng), 2);
    auto eig = apply_to_exponential(DiffOperator::from_series(f, nu), a);
    // Maclaurin series of e^{a eps} to order 24
    PowerSeries expa = PowerSeries::known(B::exp, {}, 24)
                           .compose(PowerSeries::monomial(1, 24).scale(a));
    auto applied = apply_series_operator(DiffOperator::from_series(f, nu), expa);
    CHECK(applied.coeff(0) == eig.factor);
  }
}

TEST_CASE("operator matrices") {
  auto d = operator_matrix(BasicOperator::derivative, 3);
  CHECK(d.at(0, 1) == Scalar(1));
  CHECK(d.at(1, 2) == Scalar(2));
  CHECK(d.at(2, 3) == Scalar(3));
  CHECK(d.at(3, 3) == Scalar(0));

  // [d, eps] = identity on degrees 0..N-1
  int N = 6;
  auto D = operator_matrix(BasicOperator::derivative, N);
  auto E = operator_matrix(BasicOperator::mult_eps, N);
  auto comm = D * E - E * D;
  for (int r = 0; r <= N; ++r)
    for (int c = 0; c < N; ++c) CHECK(comm.at(r, c) == (r == c ? Scalar(1) : Scalar(0)));

  // f(y) = y^2 realizes D^2
  auto f2 = operator_matrix(DiffOperator::from_series(PowerSeries::monomial(2, 2)), N);
  auto d2 = D * D;
  for (int r = 0; r <= N; ++r)
    for (int c = 0; c <= N; ++c) CHECK(f2.at(r, c) == d2.at(r, c));

  // nilpotency
  CHECK(D.pow(N + 1).is_exactly_zero());
}

TEST_CASE("commutator identity f'(d) = f(d) eps - eps f(d)") {
  CHECK(commutator_derivative_check(PowerSeries::monomial(2, 2), 8) == Scalar(0));
  CHECK(commutator_derivative_check(PowerSeries::constant(Scalar(5), 0), 8) == Scalar(0));

  // order-6 exp truncation at N=16, against brute-force matrix arithmetic
  PowerSeries e6 = PowerSeries::known(B::exp, {}, 6);
  CHECK(commutator_derivative_check(e6, 16) == Scalar(0));
  {
    int N = 16;
    auto lhs = operator_matrix(DiffOperator::from_series(e6.differentiate()), N);
    auto fd = operator_matrix(DiffOperator::from_series(e6), N);
    auto E = operator_matrix(BasicOperator::mult_eps, N);
    auto rhs = fd * E - E * fd;
    auto resid = lhs - rhs;
    for (int r = 0; r <= N; ++r)
      for (int c = 0; c + 7 <= N; ++c) CHECK(resid.at(r, c) == Scalar(0));
  }
  CHECK_THROWS_AS(commutator_derivative_check(PowerSeries::monomial(4, 4), 4), Error);
}

TEST_CASE("heat semigroup on delta atoms") {
  auto g = delta_semigroup(Scalar(1), KernelExpr::delta());
  // e^{-eps^2/4}/sqrt(4 pi) at eps = 0 and eps = 1
  CHECK(g.eval_at(Scalar(0)).to_complex().real() ==
        doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)));
  CHECK(g.eval_at(Scalar(1)).to_complex().real() ==
        doctest::Approx(std::exp(-0.25) / std::sqrt(4.0 * M_PI)));

  // widths add: a=1 then a=2 equals a=3 in one step, exactly
  CHECK(delta_semigroup(Scalar(2), g) == delta_semigroup(Scalar(3), KernelExpr::delta()));

  // a -> 0 approaches the identity on an already-regularized atom
  auto base = KernelExpr::gaussian_delta(Scalar(1));
  auto nudged = delta_semigroup(Scalar::rational(1, 1000000), base);
  CHECK(std::abs(nudged.eval_at(Scalar::real(0.3)).to_complex().real() -
                 base.eval_at(Scalar::real(0.3)).to_complex().real()) < 1e-6);

  CHECK_THROWS_AS(delta_semigroup(Scalar(-1), KernelExpr::delta()), Error);
}

TEST_CASE("one-sided limits and the singular ledger") {
  // Theta at 0 takes the side convention
  CHECK(KernelExpr::theta_at(Scalar(0)).limit_at_zero(Side::plus) == Scalar(1));
  CHECK(KernelExpr::theta_at(Scalar(0)).limit_at_zero(Side::minus) == Scalar(0));
  CHECK_THROWS_AS(KernelExpr::theta_at(Scalar(0)).limit_at_zero(Side::none), DomainError);

  // 1/eps alone diverges; (e^{b eps} - e^{a eps})/eps tends to b - a
  CHECK_THROWS_AS(KernelExpr::recip().limit_at_zero(Side::plus), DivergenceError);
  auto diff = KernelExpr::exp_poly(Scalar(5), -1) - KernelExpr::exp_poly(Scalar(2), -1);
  CHECK(diff.limit_at_zero(Side::none) == Scalar(3));

  // a surviving symbolic constant is an error
  int sym = 0;
  auto with_c = KernelExpr::recip().antiderivative(ConstantPolicy::symbolic(), sym);
  CHECK_THROWS_AS(with_c.limit_at_zero(Side::plus), ConstantError);
}

TEST_CASE("atom antiderivatives against the quadrature oracle, family by family") {
  auto eval = [](const KernelExpr& g, double x) {
    return g.eval_at(Scalar::real(x)).to_complex().real();
  };
  using Base = KernelExpr::Base;
  auto atom = [](Scalar w, int k, Scalar r, Base b, Scalar param) {
    return KernelExpr({KernelExpr::Atom{w, k, r, Scalar(0), b, param, 0}});
  };
  struct Case {
    KernelExpr g;
    double lo, hi;
  };
  std::vector<Case> cases = {
      {KernelExpr::monomial(3, Scalar(2)), 0.5, 2.0},
      {KernelExpr::recip(), 0.5, 2.0},
      {KernelExpr::monomial(-2), 0.5, 2.0},
      {KernelExpr::exp_poly(Scalar::rational(-3, 2), 3), 0.5, 2.0},
      {atom(Scalar(1), -2, Scalar(-2), Base::one, Scalar(0)), 0.5, 2.5},
      {atom(Scalar(1), -1, Scalar(-1), Base::one, Scalar(0)), 0.5, 2.5},  // -> Ei
      {atom(Scalar(1), 2, Scalar(0), Base::log_u, Scalar(0)), 0.5, 2.5},
      {atom(Scalar(1), -2, Scalar(0), Base::log_u, Scalar(0)), 0.5, 2.5},
      {atom(Scalar(1), 2, Scalar(-1), Base::theta, Scalar(0)), 0.3, 2.0},
      {atom(Scalar(1), 3, Scalar(0), Base::delta_gauss, Scalar::rational(1, 3)), -1.5, 1.5},
      {atom(Scalar(1), 2, Scalar(0), Base::theta_gauss, Scalar::rational(1, 2)), -1.5, 1.5},
      {atom(Scalar(1), 2, Scalar(0), Base::delta_sinc, Scalar(3)), -2.0, 2.0},
      {atom(Scalar(1), 1, Scalar(0), Base::theta_sinc, Scalar(4)), -2.0, 2.0},
      {atom(Scalar(1), 1, Scalar(0), Base::ei, Scalar(1)), 0.5, 2.0},
  };
  for (const auto& c : cases) {
    int sym = 0;
    KernelExpr anti = c.g.antiderivative(ConstantPolicy::zero(), sym);
    auto q = oracle::quad_finite([&](double x) { return eval(c.g, x); }, c.lo, c.hi, 1e-12);
    double lhs = eval(anti, c.hi) - eval(anti, c.lo);
    CHECK(std::abs(lhs - q.value) <= 1e-9 * (1.0 + std::abs(q.value)));
  }
}

TEST_CASE("constant cancellation in a worked-style pipeline") {
  // antiderivative of delta, then the difference of two shifts: the
  // symbolic constant cancels and the limit is Theta(1) - Theta(-1) = 1.
  int sym = 0;
  auto anti = KernelExpr::delta().antiderivative(ConstantPolicy::symbolic(), sym);
  auto diff = anti.shift_by(Scalar(1)) - anti.shift_by(Scalar(-1));
  CHECK_FALSE(diff.has_symbolic_constant());
  CHECK(diff.limit_at_zero(Side::none) == Scalar(1));
}
