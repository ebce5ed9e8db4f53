#include <random>

#include <benchmark/benchmark.h>

#include "cesm/evolution.hpp"
#include "cesm/learners.hpp"
#include "cesm/spectral.hpp"
#include "cesm/synthgen.hpp"
#include "cesm/tracking.hpp"

using namespace cesm;

namespace {

// One snapshot of the default rotating-subspace scenario.
Matrix scenario_snapshot(int points_per_subspace) {
  ScenarioConfig cfg;
  cfg.points_per_subspace = points_per_subspace;
  cfg.horizon = 1;
  Rng rng(1);
  return generate_sequence(cfg, rng).snapshots.front().data;
}

void BM_Omp(benchmark::State& state) {
  const Matrix x = scenario_snapshot(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(learn_omp(x, x, 6));
  state.SetComplexityN(x.cols());
}
BENCHMARK(BM_Omp)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Aols(benchmark::State& state) {
  const Matrix x = scenario_snapshot(50);
  const int lookahead = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(learn_aols(x, x, 3, lookahead));
}
BENCHMARK(BM_Aols)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_AdmmBp(benchmark::State& state) {
  const Matrix x = scenario_snapshot(static_cast<int>(state.range(0)));
  LearnerConfig cfg;
  cfg.method = LearnerMethod::Bp;
  for (auto _ : state) benchmark::DoNotOptimize(learn_bp_admm(x, x, cfg));
  state.SetComplexityN(x.cols());
}
BENCHMARK(BM_AdmmBp)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SpectralCluster(benchmark::State& state) {
  const Matrix x = scenario_snapshot(static_cast<int>(state.range(0)));
  const AffinityMatrix a = build_affinity(learn_omp(x, x, 6));
  SpectralConfig cfg;
  cfg.n = 10;
  for (auto _ : state) benchmark::DoNotOptimize(spectral_cluster(a, cfg));
}
BENCHMARK(BM_SpectralCluster)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_GoldenSection(benchmark::State& state) {
  const Matrix x = scenario_snapshot(50);
  const RepresentationMatrix c = learn_omp(x, x, 6);
  const Matrix shifted = x + 0.1 * Matrix::Ones(x.rows(), x.cols());
  const RepresentationMatrix u = learn_omp(shifted, shifted, 6);
  for (auto _ : state) benchmark::DoNotOptimize(golden_section_alpha(x, u, c));
}
BENCHMARK(BM_GoldenSection)->Unit(benchmark::kMicrosecond);

void BM_Hungarian(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> w(0, 100);
  const auto n = static_cast<Index>(state.range(0));
  Matrix weights(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) weights(i, j) = w(rng);
  for (auto _ : state) benchmark::DoNotOptimize(max_weight_assignment(weights));
}
BENCHMARK(BM_Hungarian)->Arg(10)->Arg(50);

}  // namespace
BENCHMARK_MAIN();
