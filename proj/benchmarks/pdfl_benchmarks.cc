#include <random>

#include <benchmark/benchmark.h>

#include "pdfl/clustering.h"
#include "pdfl/data.h"
#include "pdfl/federated.h"
#include "pdfl/model.h"
#include "pdfl/privacy.h"

namespace pdfl {
namespace {

WeightMap RandomWeights(int n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  WeightMap out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(d);
    for (double& x : v) x = normal(rng);
    out.emplace(i, ParamVector(std::move(v)));
  }
  return out;
}

void BM_ClusterWeights(benchmark::State& state) {
  const auto weights = RandomWeights(static_cast<int>(state.range(0)), 1000, 1);
  const ClusterParams params{8, 0.05, Metric::kCosine, 3};
  for (auto _ : state) benchmark::DoNotOptimize(ClusterWeights(weights, params));
}
BENCHMARK(BM_ClusterWeights)->Arg(50)->Arg(200);

void BM_ClientUpdate(benchmark::State& state) {
  const ModelSpec spec{ModelKind::kLogisticRegression, 20, 0, 10};
  const Dataset shard = SynthClassification(200, 20, 10, 1);
  const ParamVector w = InitParams(spec, 1);
  const TrainConfig train{3, 0.1, 16};
  for (auto _ : state) benchmark::DoNotOptimize(ClientUpdate(spec, w, shard, train, 7));
}
BENCHMARK(BM_ClientUpdate);

void BM_RunRound(benchmark::State& state) {
  const ModelSpec spec{ModelKind::kLogisticRegression, 20, 0, 10};
  const Dataset ds = SynthClassification(10000, 20, 10, 1);
  const auto clients = MakeClients(Partition(ds, {PartitionMode::kIid, 50, 1, 1}), 1);
  RunConfig cfg;
  cfg.sigma = 3.0;
  cfg.train = {3, 0.1, 16};
  const ParamVector w = InitParams(spec, 1);
  for (auto _ : state) benchmark::DoNotOptimize(RunRound(spec, w, clients, cfg, {1, 0}));
}
BENCHMARK(BM_RunRound)->Unit(benchmark::kMillisecond);

void BM_CalibrateSigma(benchmark::State& state) {
  double eps = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(CalibrateSigma(eps, 1e-5, 50));
    eps = eps < 50.0 ? eps + 0.5 : 1.0;
  }
}
BENCHMARK(BM_CalibrateSigma);

}  // namespace
}  // namespace pdfl

BENCHMARK_MAIN();
