#include <benchmark/benchmark.h>

#include "qhelper/entropy.hpp"

using namespace qhelper;

namespace {

DensityOperator make_state(int n_qubits, std::uint64_t seed) {
  LabelList labels;
  std::vector<int> dims;
  for (int i = 0; i < n_qubits; ++i) {
    labels.push_back(std::string(1, static_cast<char>('A' + i)));
    dims.push_back(2);
  }
  Rng rng(seed);
  return random_density(SystemLayout(labels, dims), rng);
}

void BM_entropy(benchmark::State& state) {
  const DensityOperator rho = make_state(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(entropy(rho));
  state.SetComplexityN(state.range(0));
}

void BM_partial_trace(benchmark::State& state) {
  const DensityOperator rho = make_state(static_cast<int>(state.range(0)), 2);
  const LabelList keep = {"A"};
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, keep));
}

void BM_pure_state_mutual_info(benchmark::State& state) {
  Rng rng(3);
  const PureState psi = random_pure(
      SystemLayout({"A", "C", "E", "R"}, {2, 2, (int)state.range(0), 4}), rng);
  const LabelList ra = {"R", "A"}, c = {"C"};
  for (auto _ : state) benchmark::DoNotOptimize(mutual_info(psi, ra, c));
}

void BM_purify(benchmark::State& state) {
  const DensityOperator rho = make_state(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(purify(rho, "Z"));
}

}  // namespace

BENCHMARK(BM_entropy)->DenseRange(1, 6);
BENCHMARK(BM_partial_trace)->DenseRange(2, 6);
BENCHMARK(BM_pure_state_mutual_info)->RangeMultiplier(2)->Range(2, 8);
BENCHMARK(BM_purify)->DenseRange(1, 4);
