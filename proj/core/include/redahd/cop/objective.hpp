#pragma once

#include "redahd/cop/types.hpp"

namespace redahd::cop {

// q(x, y): negated cost for minimisation kinds, total value for KP/MKP. The
// solution must pass validate(); otherwise ContractError is thrown.
double objective(const Instance& instance, const Solution& solution);

// Same as objective() but skips validation. Only for callers that already hold
// a clean ValidationReport for this exact pair.
double objective_unchecked(const Instance& instance, const Solution& solution);

enum class Sense { Minimize, Maximize };

Sense sense_of(CopKind kind);

// Percent gap of a positive objective magnitude against a reference optimum or
// bound. Throws ContractError when reference <= 0.
double optimality_gap(double value, double reference, Sense sense);

// ceil(sum(sizes) / capacity), the reference used for BPP/OBPP gaps.
double bin_lower_bound(const std::vector<double>& sizes, double capacity);

}  // namespace redahd::cop
