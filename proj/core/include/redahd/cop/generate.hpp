#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "redahd/cop/types.hpp"

namespace redahd::cop {

enum class SizeDistribution { UniformInt, Weibull };

// Generator parameters. Fields that do not apply to a kind are ignored;
// unset optionals take the per-kind defaults documented in generate.cpp.
struct GeneratorParams {
  std::size_t n = 50;                 // nodes / customers / items
  std::size_t m = 5;                  // MKP knapsacks
  std::optional<double> capacity;     // CVRP vehicle, BPP/OBPP bin, KP knapsack
  double coord_min = 0.0;
  double coord_max = 1.0;
  int demand_min = 1;                 // CVRP
  int demand_max = 9;
  int size_min = 20;                  // BPP/OBPP uniform sizes
  int size_max = 100;
  SizeDistribution distribution = SizeDistribution::UniformInt;
  double weibull_shape = 3.0;
  double weibull_scale = 45.0;
};

// Per-kind defaults filled in (capacity in particular).
GeneratorParams resolve_params(CopKind kind, GeneratorParams params);

std::string params_to_json(CopKind kind, const GeneratorParams& params);
GeneratorParams params_from_json(const std::string& json_text);

// Deterministic for fixed (kind, params, seed, count). Throws ContractError for
// count == 0 or infeasible parameters.
Dataset generate_instances(CopKind kind, const GeneratorParams& params,
                           std::uint64_t seed, std::size_t count);

}  // namespace redahd::cop
