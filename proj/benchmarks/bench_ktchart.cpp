#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "ktchart/ktchart.hpp"

using namespace ktchart;

namespace {

ObservationMatrix gaussian_matrix(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(rows * dim);
  for (double& v : values) v = normal(rng);
  return {rows, dim, std::move(values)};
}

void BM_SolveDual(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const ObservationMatrix data = gaussian_matrix(p, 4, 1);
  const KernelSpec kernel = KernelSpec::gaussian(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dual(data, kernel, 2.0 / static_cast<double>(p)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveDual)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_TrainSampled(benchmark::State& state) {
  const ObservationMatrix data = gaussian_matrix(static_cast<std::size_t>(state.range(0)), 4, 2);
  const KernelSpec kernel = KernelSpec::gaussian(median_distance_bandwidth(data, 3));
  SamplingConfig cfg;
  cfg.sample_size = 5;
  cfg.rng_seed = 4;
  for (auto _ : state) benchmark::DoNotOptimize(train_sampled(data, kernel, 0.001, cfg));
}
BENCHMARK(BM_TrainSampled)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State& state) {
  const ObservationMatrix data = gaussian_matrix(200, 4, 5);
  const SvddModel model = train_full(data, KernelSpec::gaussian(1.5), 0.05);
  const ObservationMatrix probes = gaussian_matrix(1024, 4, 6);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.score(probes.row(i)));
    i = (i + 1) % probes.rows();
  }
  state.counters["support_vectors"] = static_cast<double>(model.support_count());
}
BENCHMARK(BM_Score);

void BM_MonitorPush(benchmark::State& state) {
  PhaseIConfig cfg;
  cfg.window = WindowSpec(500, 150);
  cfg.sampling.sample_size = 5;
  cfg.sampling.rng_seed = 7;
  const ObservationMatrix phase1_data = gaussian_matrix(5000, 4, 8);
  cfg.window_kernel = KernelSpec::gaussian(median_distance_bandwidth(phase1_data, 9));
  auto model = std::make_shared<const PhaseIModel>(phase1(phase1_data, cfg).model);
  const ObservationMatrix stream = gaussian_matrix(3500, 4, 10);

  for (auto _ : state) {
    Phase2Monitor monitor(model);
    for (std::size_t i = 0; i < stream.rows(); ++i) benchmark::DoNotOptimize(monitor.push(stream.row(i)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream.rows()));
}
BENCHMARK(BM_MonitorPush)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
