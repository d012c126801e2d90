#include <benchmark/benchmark.h>

#include <cmath>

#include "opint/integrate.hpp"
#include "opint/laplace.hpp"
#include "opint/lower.hpp"
#include "opint/oracle.hpp"

using namespace opint;

namespace {

KernelIntegrand kernel_of(const char* text) {
  return lower_kernel(bind_variable(parse_expression(text), "x"));
}

void BM_series_mul_exact(benchmark::State& state) {
  auto a = PowerSeries::known(PowerSeries::Builtin::sin, {}, state.range(0));
  auto b = PowerSeries::known(PowerSeries::Builtin::exp, {}, state.range(0));
  for (auto _ : state) {
    auto c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_series_mul_exact)->Arg(16)->Arg(64)->Arg(128);

void BM_delta_route_exact(benchmark::State& state) {
  auto f = kernel_of("sin(x)^5/x");
  auto reg = RegScheme::gaussian();
  auto pol = ConstantPolicy::symbolic();
  for (auto _ : state) {
    auto r = integrate_real_line(f, RealLineRoute::delta, reg, pol, 1e-9);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_delta_route_exact);

void BM_delta_route_gaussian_schedule(benchmark::State& state) {
  auto f = kernel_of("sin(x)^2/x^2");
  auto reg = RegScheme::gaussian();
  auto pol = ConstantPolicy::symbolic();
  for (auto _ : state) {
    auto r = integrate_real_line(f, RealLineRoute::delta, reg, pol, 1e-4, true);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_delta_route_gaussian_schedule);

void BM_series_route_accelerated(benchmark::State& state) {
  auto s = lower_series(bind_variable(parse_expression("1/(1+x^2)"), "x"),
                        static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto r = integrate_finite(s, Scalar(-1), Scalar(1), 1e-6);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_series_route_accelerated)->Arg(64)->Arg(200);

void BM_laplace_roundtrip(benchmark::State& state) {
  ExpPoly f({{Scalar(2), 3, Scalar(-1)},
             {Scalar(-1), 1, Scalar::rational(-5, 2)},
             {Scalar(4), 0, Scalar::rational(-1, 3)}});
  for (auto _ : state) {
    double e = laplace_roundtrip_check(f, 1e-9);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_laplace_roundtrip);

void BM_oracle_oscillatory(benchmark::State& state) {
  for (auto _ : state) {
    auto q = oracle::quad_unbounded(
        [](double x) { return x == 0 ? 1.0 : std::sin(x) / x; }, oracle::Domain::real_line,
        1e-9);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_oracle_oscillatory);

void BM_commutator_check(benchmark::State& state) {
  auto f = PowerSeries::known(PowerSeries::Builtin::exp, {}, 8);
  for (auto _ : state) {
    auto r = commutator_derivative_check(f, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_commutator_check)->Arg(16)->Arg(24);

}  // namespace

BENCHMARK_MAIN();
