#include <benchmark/benchmark.h>

#include "mscale/experiment.hpp"
#include "mscale/ghe.hpp"
#include "mscale/hypothesis.hpp"
#include "mscale/processes.hpp"
#include "mscale/surrogates.hpp"
#include "mscale/tuning.hpp"

using namespace mscale;

static void BM_FbmGenerate(benchmark::State& state) {
  const FbmGenerator gen({0.3, static_cast<std::size_t>(state.range(0)), 1.0});
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen.generate({1, stream++}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FbmGenerate)->Arg(4096)->Arg(10000);

static void BM_RBergomi(benchmark::State& state) {
  RBergomiParams p;
  p.n = static_cast<std::size_t>(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_rbergomi(p, {2, stream++}));
}
BENCHMARK(BM_RBergomi)->Arg(4096)->Arg(10000);

static void BM_Mrw(benchmark::State& state) {
  MrwParams p{0.25, 0, 1.0, static_cast<std::size_t>(state.range(0))};
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_mrw(p, {3, stream++}));
}
BENCHMARK(BM_Mrw)->Arg(10000);

static void BM_Flsm(benchmark::State& state) {
  FlsmParams p{1.9, 0.9, static_cast<std::size_t>(state.range(0)), 0};
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_flsm(p, {4, stream++}));
}
BENCHMARK(BM_Flsm)->Arg(10000);

static void BM_MultiscalingB(benchmark::State& state) {
  const auto path = simulate_fbm({0.3, 10000, 1.0}, {5, 0});
  const auto taus = tau_range(static_cast<int>(state.range(0)));
  const auto qs = q_grid_up_to(1.6);
  for (auto _ : state) benchmark::DoNotOptimize(multiscaling_b(path.values, taus, qs));
}
BENCHMARK(BM_MultiscalingB)->Arg(50)->Arg(250);

static void BM_Tune(benchmark::State& state) {
  RBergomiParams p;
  p.n = 10000;
  const auto path = simulate_rbergomi(p, {6, 0}).log_price;
  for (auto _ : state) benchmark::DoNotOptimize(tune(path));
}
BENCHMARK(BM_Tune);

static void BM_TwoStage(benchmark::State& state) {
  RBergomiParams p;
  p.hurst = 0.05;
  p.n = 4096;
  const auto path = simulate_rbergomi(p, {7, 0}).log_price;
  TwoStageConfig cfg;
  cfg.fbm_surrogates = 200;
  cfg.shuffle_surrogates = 200;
  cfg.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_two_stage(path, cfg, {8, 0}));
}
BENCHMARK(BM_TwoStage)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_TailIndex(benchmark::State& state) {
  const auto x = stable_noise({9, 0}, 1.6, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_tail_index(x));
}
BENCHMARK(BM_TailIndex)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
