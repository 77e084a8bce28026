#include <benchmark/benchmark.h>

#include <cmath>

#include "phgen/quadrature.hpp"
#include "phgen/radial_function.hpp"

namespace {

void BM_AdaptiveSimpsonGaussian(benchmark::State& state) {
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        phgen::adaptive_simpson([](double r) { return r * r * std::exp(-r * r); }, 0.0, 12.0, {tol, 50}));
  }
}
BENCHMARK(BM_AdaptiveSimpsonGaussian)->Arg(8)->Arg(10)->Arg(12);

// Fresh antiderivative node per iteration, so each query pays for the cache fill.
void BM_AntiderivativeColdQuery(benchmark::State& state) {
  for (auto _ : state) {
    const auto F = phgen::RadialFunction::antiderivative(phgen::RadialFunction::scaled_tanh(0.5, 1.0));
    benchmark::DoNotOptimize(F(5.0));
  }
}
BENCHMARK(BM_AntiderivativeColdQuery);

void BM_AntiderivativeWarmSweep(benchmark::State& state) {
  const auto F = phgen::RadialFunction::antiderivative(phgen::RadialFunction::scaled_tanh(0.5, 1.0));
  F(8.0);
  for (auto _ : state) {
    double s = 0.0;
    for (int i = 0; i < 1600; ++i) s += F(0.05 + i * 0.005);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_AntiderivativeWarmSweep)->Unit(benchmark::kMicrosecond);

}  // namespace
