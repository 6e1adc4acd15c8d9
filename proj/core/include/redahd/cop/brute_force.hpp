#pragma once

#include <cstddef>

#include "redahd/cop/types.hpp"

namespace redahd::cop {

inline constexpr std::size_t kMaxBruteForceRouting = 9;   // TSP, CVRP
inline constexpr std::size_t kMaxBruteForceItems = 15;    // KP, MKP, BPP, OBPP

struct OptimalSolution {
  Solution solution;
  double objective = 0.0;
};

// Exhaustive search for tiny instances; ties resolve to the lexicographically
// smallest solution in the kind's canonical encoding. Throws ContractError
// when the instance exceeds the size limits above.
OptimalSolution brute_force_optimum(const Instance& instance);

}  // namespace redahd::cop
