#include <benchmark/benchmark.h>

#include "qhelper/region.hpp"

using namespace qhelper;

namespace {

void BM_params_to_isometry(benchmark::State& state) {
  const int de = static_cast<int>(state.range(0));
  ChannelParams p = ChannelParams::zeros(2, 2, de);
  Rng rng(7);
  for (auto& t : p.theta) t = rng.gaussian();
  for (auto _ : state) benchmark::DoNotOptimize(params_to_isometry(p));
}

void BM_objective_eval(benchmark::State& state) {
  const DensityOperator rho = isotropic_state(0.75);
  ChannelParams p = ChannelParams::zeros(2, 2, static_cast<int>(state.range(0)));
  Rng rng(8);
  for (auto& t : p.theta) t = rng.gaussian();
  for (auto _ : state)
    benchmark::DoNotOptimize(region::scalarized_objective(rho, p, 1.0));
}

void BM_minimize_single_lambda(benchmark::State& state) {
  const DensityOperator bell = bell_pair().to_density();
  region::FrontierConfig cfg;
  cfg.restarts = 2;
  cfg.max_iters = 60;
  cfg.seed = 5;
  for (auto _ : state)
    benchmark::DoNotOptimize(region::minimize(bell, 64.0, cfg, 0));
}

}  // namespace

BENCHMARK(BM_params_to_isometry)->DenseRange(2, 6);
BENCHMARK(BM_objective_eval)->DenseRange(2, 4);
BENCHMARK(BM_minimize_single_lambda)->Unit(benchmark::kMillisecond);
