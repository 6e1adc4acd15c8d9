#pragma once

#include <functional>
#include <span>
#include <vector>

#include "redahd/cop/types.hpp"

namespace redahd::cop {

// Receives the arriving item size and the remaining capacity of every open
// bin (in bin-id order) and returns one priority score per open bin.
using PriorityScorer =
    std::function<std::vector<double>(double item_size,
                                      std::span<const double> remaining)>;

// Packs the stream in arrival order: among open bins that still fit the item,
// the highest score wins (ties go to the lowest bin id); when none fits a new
// bin is opened. The scorer is not consulted while no bin is open.
//
// Throws EvaluationFailure if the scorer returns a vector of the wrong length
// or containing non-finite values.
ObppSolution simulate_online_packing(const ObppInstance& instance,
                                     const PriorityScorer& scorer);

}  // namespace redahd::cop
