#include <benchmark/benchmark.h>

#include "opeval/analytics.hpp"
#include "opeval/bandit.hpp"
#include "opeval/estimators.hpp"
#include "opeval/experiments.hpp"
#include "opeval/montecarlo.hpp"

using namespace opeval;

namespace {

const BanditInstance& reverse_instance() {
  static const BanditInstance inst = comparison_instance("reverse").instance;
  return inst;
}

void BM_LrEstimate(benchmark::State& state) {
  const BanditInstance& inst = reverse_instance();
  const Dataset d = sample_dataset(inst, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(lr_estimate(inst.target(), inst.behavior(), d).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LrEstimate)->Arg(100)->Arg(10'000);

void BM_RegEstimate(benchmark::State& state) {
  const BanditInstance& inst = reverse_instance();
  const Dataset d = sample_dataset(inst, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(reg_estimate(inst.target(), d).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RegEstimate)->Arg(100)->Arg(10'000);

void BM_SampleDataset(benchmark::State& state) {
  const BanditInstance& inst = reverse_instance();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_dataset(inst, static_cast<std::size_t>(state.range(0)), ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleDataset)->Arg(1000);

// Exact oracle on a 4-action Bernoulli instance; leaves grow as 8^n.
void BM_ExactOracle(benchmark::State& state) {
  const BanditInstance inst(Policy({0.1, 0.2, 0.3, 0.4}), Policy({0.4, 0.3, 0.2, 0.1}),
                            RewardModel({Bernoulli{0.2}, Bernoulli{0.4}, Bernoulli{0.6}, Bernoulli{0.8}}));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_exact_moments(inst, n, EstimatorId::kReg).mse);
  state.counters["leaves"] = static_cast<double>(exact_outcome_count(inst, n));
}
BENCHMARK(BM_ExactOracle)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_RunMc(benchmark::State& state) {
  const BanditInstance& inst = reverse_instance();
  const McConfig cfg{200, {10, 100, 1000}, 3, {EstimatorId::kLr, EstimatorId::kReg}, 1};
  for (auto _ : state) benchmark::DoNotOptimize(run_mc(inst, cfg).rows.size());
}
BENCHMARK(BM_RunMc)->Unit(benchmark::kMillisecond);

void BM_MinimaxExhaustive(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const BanditInstance inst = comparison_instance("reverse", k).instance;
  const MinimaxClass cls = MinimaxClass::from_instance(inst, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(minimax_lower_bound(cls, 50).value);
}
BENCHMARK(BM_MinimaxExhaustive)->Arg(10)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
