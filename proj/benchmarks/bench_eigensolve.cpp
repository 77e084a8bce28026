#include <benchmark/benchmark.h>

#include <random>

#include "phgen/catalog.hpp"
#include "phgen/discrete.hpp"
#include "phgen/eigensolve.hpp"

namespace {

phgen::OperatorMatrix random_matrix(int n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> d;
  phgen::OperatorMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {d(rng), d(rng)};
  return m;
}

void BM_HessenbergRandom(benchmark::State& state) {
  const auto a = random_matrix(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(phgen::hessenberg(a));
}
BENCHMARK(BM_HessenbergRandom)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_QrEigenvaluesRandom(benchmark::State& state) {
  const auto a = random_matrix(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(phgen::qr_eigenvalues(a));
}
BENCHMARK(BM_QrEigenvaluesRandom)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

// The discretized H is tridiagonal; this is the spectrum command's hot path.
void BM_QrEigenvaluesHamiltonian(benchmark::State& state) {
  const auto model = phgen::construct(phgen::get_example("1A").spec);
  const auto h = phgen::discretize_H(
      model, phgen::make_grid(0.05, 8.0, static_cast<int>(state.range(0)), phgen::GridMode::kHalfLine));
  for (auto _ : state) benchmark::DoNotOptimize(phgen::qr_eigenvalues(h));
}
BENCHMARK(BM_QrEigenvaluesHamiltonian)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
