#include <benchmark/benchmark.h>

#include "redahd/cop/baselines.hpp"
#include "redahd/cop/generate.hpp"
#include "redahd/cop/objective.hpp"
#include "redahd/cop/online_packing.hpp"
#include "redahd/cop/serialize.hpp"
#include "redahd/cop/validate.hpp"

using namespace redahd;

namespace {

const cop::Instance& tsp(std::size_t n) {
  static std::map<std::size_t, cop::Instance> cache;
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, cop::generate_instances(cop::CopKind::Tsp, {.n = n}, 1, 1).instances[0]).first;
  return it->second;
}

void BM_TspValidateAndObjective(benchmark::State& state) {
  const auto& x = tsp(static_cast<std::size_t>(state.range(0)));
  const auto y = cop::baseline_solve(cop::Baseline::NearestNeighbor, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cop::validate(x, y));
    benchmark::DoNotOptimize(cop::objective_unchecked(x, y));
  }
}
BENCHMARK(BM_TspValidateAndObjective)->Arg(50)->Arg(200)->Arg(1000);

void BM_NearestNeighbor(benchmark::State& state) {
  const auto& x = tsp(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cop::baseline_solve(cop::Baseline::NearestNeighbor, x));
}
BENCHMARK(BM_NearestNeighbor)->Arg(50)->Arg(200)->Arg(1000);

void BM_OnlinePackingBestFit(benchmark::State& state) {
  cop::GeneratorParams p;
  p.n = static_cast<std::size_t>(state.range(0));
  p.capacity = 100;
  p.distribution = cop::SizeDistribution::Weibull;
  const auto x = std::get<cop::ObppInstance>(cop::generate_instances(cop::CopKind::Obpp, p, 3, 1).instances[0]);
  const cop::PriorityScorer best_fit = [](double item, std::span<const double> rem) {
    std::vector<double> s(rem.size());
    for (std::size_t i = 0; i < rem.size(); ++i) s[i] = item - rem[i];
    return s;
  };
  for (auto _ : state) benchmark::DoNotOptimize(cop::simulate_online_packing(x, best_fit));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OnlinePackingBestFit)->Arg(1000)->Arg(5000);

void BM_DatasetJsonRoundTrip(benchmark::State& state) {
  const auto d = cop::generate_instances(cop::CopKind::Tsp, {.n = 100}, 2, 16);
  for (auto _ : state) benchmark::DoNotOptimize(cop::dataset_from_jsonl(cop::dataset_to_jsonl(d)));
}
BENCHMARK(BM_DatasetJsonRoundTrip);

}  // namespace
