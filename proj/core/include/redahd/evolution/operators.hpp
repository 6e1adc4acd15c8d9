#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "redahd/cop/objective.hpp"
#include "redahd/evolution/heuristic.hpp"
#include "redahd/util/random.hpp"

namespace redahd::evolution {

// Heuristics whose fitness differs by at most this much count as duplicates.
inline constexpr double kDuplicateTolerance = 1e-6;

// p_j proportional to 1/|s_j| (minimisation) or max(s_j, 0) (maximisation).
// Unset and non-finite scores weigh 0; if every weight is 0 the distribution
// is uniform. A zero score under minimisation takes all the mass (split
// evenly among such LRs).
std::vector<double> ration_probabilities(const std::vector<std::optional<double>>& scores,
                                         cop::Sense sense);

// N independent categorical draws; counts per LR, summing to N. A count may
// be 0.
std::vector<int> allocate_ration(const std::vector<std::optional<double>>& scores, int n,
                                 cop::Sense sense, util::Rng& rng);

// Indices into population. Heuristics are ranked best-first (ties: creation
// order); rank r (1-based) is drawn with weight 1/(r + |P|), without
// replacement, then with replacement for any count beyond |P|. Every entry
// must be ok.
std::vector<std::size_t> select_parents(const std::vector<Heuristic>& population, std::size_t count,
                                        util::Rng& rng);

struct ManagementSettings {
  std::size_t capacity = 20;  // N
  int generation = 0;
  int stagnation_threshold = 3;  // T: generations before it are the early stage
  int l = 3;
  std::vector<std::string> active_lrs;
};

// Keeps ok heuristics only, sorted best-first.
//   Always:         equal fitness within one LR -> keep the earliest.
//   generation >= T: equal fitness across LRs -> keep the earliest; truncate
//                    to N.
//   generation < T:  heuristics of different LRs with equal fitness share one
//                    slot of N and are all kept; afterwards every active LR is
//                    topped up to l heuristics (if it has that many), so the
//                    population may exceed N.
std::vector<Heuristic> manage_population(std::vector<Heuristic> candidates,
                                         const ManagementSettings& settings);

}  // namespace redahd::evolution
