#pragma once

#include <string_view>
#include <vector>

#include "redahd/cop/types.hpp"

namespace redahd::cop {

enum class Baseline { NearestNeighbor, BestFit, FirstFit, RatioGreedy };

std::string_view to_string(Baseline baseline);
Baseline parse_baseline(std::string_view name);

bool is_compatible(Baseline baseline, CopKind kind);
std::vector<Baseline> baselines_for(CopKind kind);

// Classical constructive heuristics used for calibration. Throws ContractError
// for an incompatible (baseline, kind) pair.
Solution baseline_solve(Baseline baseline, const Instance& instance);

}  // namespace redahd::cop
