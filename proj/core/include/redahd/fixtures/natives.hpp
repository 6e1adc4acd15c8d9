#pragma once

#include <memory>

#include "redahd/sandbox/native.hpp"

// Native stand-ins for LLM-written programs, used by the test suite, the mock
// backend and the "native" runner of the CLI.
//
// Reductions:  <kind>.identity for every kind; tsp.drop_last (g loses the last
//              node); tsp.swap_pairs (g swaps adjacent tour positions: valid
//              but worse); kp.drop_best (g discards the most valuable item).
// Heuristics:  tsp.nearest_neighbor start=, tsp.nn_2opt, tsp.index_order,
//              tsp.random seed=, tsp.skip_last;
//              cvrp.nearest_neighbor, cvrp.one_per_route;
//              bpp.first_fit_decreasing, bpp.best_fit_decreasing, bpp.next_fit;
//              obpp.best_fit, obpp.first_fit, obpp.worst_fit, obpp.bad_shape,
//              obpp.nan;
//              kp.ratio_greedy, kp.noisy_ratio seed= jitter=, kp.value_greedy,
//              kp.weight_greedy, kp.all_items;
//              mkp.ratio_greedy, mkp.noisy_ratio seed= jitter=;
//              fail.raise, fail.raise_on index=.
// Every heuristic accepts cost=<seconds>, charged per instance against the
// batch timeout.
namespace redahd::fixtures {

std::shared_ptr<sandbox::NativeRegistry> native_registry();

}  // namespace redahd::fixtures
