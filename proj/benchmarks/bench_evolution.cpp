#include <benchmark/benchmark.h>

#include <random>

#include "redahd/cop/generate.hpp"
#include "redahd/evolution/engine.hpp"
#include "redahd/evolution/operators.hpp"
#include "redahd/fixtures/designer.hpp"
#include "redahd/fixtures/natives.hpp"
#include "redahd/sandbox/native.hpp"

using namespace redahd;
using namespace redahd::evolution;

namespace {

std::vector<Heuristic> candidates(std::size_t n) {
  std::mt19937_64 g(4);
  std::vector<Heuristic> out;
  for (std::size_t i = 0; i < n; ++i) {
    Heuristic h;
    h.id = "H-" + std::to_string(i);
    h.lr_id = "LR-" + std::to_string(1 + i % 3);
    h.seq = i;
    h.status = EvalStatus::Ok;
    h.fitness = -static_cast<double>(std::uniform_int_distribution<int>(0, 40)(g));
    out.push_back(h);
  }
  return out;
}

void BM_ManagePopulation(benchmark::State& state) {
  const auto c = candidates(static_cast<std::size_t>(state.range(0)));
  const ManagementSettings s{20, static_cast<int>(state.range(1)), 3, 3, {"LR-1", "LR-2", "LR-3"}};
  for (auto _ : state) benchmark::DoNotOptimize(manage_population(c, s));
}
BENCHMARK(BM_ManagePopulation)->Args({60, 0})->Args({60, 5})->Args({600, 5});

void BM_SelectParents(benchmark::State& state) {
  const auto c = candidates(20);
  util::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(select_parents(c, 2, rng));
}
BENCHMARK(BM_SelectParents);

void BM_NativeFitness(benchmark::State& state) {
  const auto d = cop::generate_instances(cop::CopKind::Tsp, {.n = static_cast<std::size_t>(state.range(0))}, 5, 64);
  sandbox::NativeSandbox sb(fixtures::native_registry());
  const std::string h = "# native: tsp.nearest_neighbor\ndef solve_B(d):\n    return None\n";
  const std::string r =
      "# native: tsp.identity\ndef convert_input_A_to_B(c, d):\n    return d\n"
      "def convert_solution_B_to_A(solution_B):\n    return solution_B\n";
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_fitness(h, r, d, sb, 60, "bench"));
}
BENCHMARK(BM_NativeFitness)->Arg(50)->Arg(200);

// One engine generation with the scripted designer and native evaluation.
void BM_EngineGeneration(benchmark::State& state) {
  auto cfg = default_config(cop::CopKind::Kp);
  cfg.population_size = 10;
  cfg.active_lrs = 3;
  cfg.generations = 1000000;
  const auto d = cop::generate_instances(cop::CopKind::Kp, {.n = 50}, 6, 16);
  Engine e(cfg, fixtures::scripted_client(cop::CopKind::Kp, 1),
           std::make_shared<sandbox::NativeSandbox>(fixtures::native_registry()), d);
  e.initialize();
  for (auto _ : state) e.step();
}
BENCHMARK(BM_EngineGeneration)->Unit(benchmark::kMillisecond);

}  // namespace
