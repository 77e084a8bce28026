#include <benchmark/benchmark.h>

#include "phgen/catalog.hpp"
#include "phgen/discrete.hpp"
#include "phgen/generator.hpp"
#include "phgen/verifier.hpp"

namespace {

void BM_Construct(benchmark::State& state) {
  const auto spec = phgen::get_example("2iv").spec;
  for (auto _ : state) benchmark::DoNotOptimize(phgen::construct(spec));
}
BENCHMARK(BM_Construct)->Unit(benchmark::kMicrosecond);

void BM_DiscretizeH(benchmark::State& state) {
  const auto model = phgen::construct(phgen::get_example("1A").spec);
  const auto grid = phgen::make_grid(0.05, 8.0, static_cast<int>(state.range(0)), phgen::GridMode::kHalfLine);
  for (auto _ : state) benchmark::DoNotOptimize(phgen::discretize_H(model, grid));
}
BENCHMARK(BM_DiscretizeH)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_FactoredEta(benchmark::State& state) {
  const auto model = phgen::construct(phgen::get_example("1A").spec);
  const auto grid = phgen::make_grid(0.05, 8.0, static_cast<int>(state.range(0)), phgen::GridMode::kHalfLine);
  for (auto _ : state) benchmark::DoNotOptimize(phgen::discretize_eta(model, grid, phgen::EtaMethod::kFactored));
}
BENCHMARK(BM_FactoredEta)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_IntertwiningCheck(benchmark::State& state) {
  const auto model = phgen::construct(phgen::get_example("1A").spec);
  const auto grid = phgen::make_grid(0.05, 8.0, static_cast<int>(state.range(0)), phgen::GridMode::kHalfLine);
  const auto batch = phgen::TestBatch::make(grid);
  for (auto _ : state) benchmark::DoNotOptimize(phgen::check_intertwining(model, grid, batch));
}
BENCHMARK(BM_IntertwiningCheck)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

}  // namespace
