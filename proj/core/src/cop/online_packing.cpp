#include "redahd/cop/online_packing.hpp"

#include <cmath>
#include <string>

#include "redahd/error.hpp"

namespace redahd::cop {

ObppSolution simulate_online_packing(const ObppInstance& instance,
                                     const PriorityScorer& scorer) {
  ObppSolution solution;
  solution.assignment.reserve(instance.item_stream.size());
  std::vector<double> remaining;

  for (double item : instance.item_stream) {
    int chosen = -1;
    if (!remaining.empty()) {
      const std::vector<double> scores = scorer(item, remaining);
      if (scores.size() != remaining.size()) {
        throw EvaluationFailure("priority function returned " +
                                std::to_string(scores.size()) + " scores for " +
                                std::to_string(remaining.size()) + " open bins");
      }
      for (std::size_t b = 0; b < scores.size(); ++b) {
        if (!std::isfinite(scores[b])) {
          throw EvaluationFailure("priority function returned a non-finite score");
        }
        if (remaining[b] < item) continue;
        if (chosen < 0 || scores[b] > scores[static_cast<std::size_t>(chosen)]) {
          chosen = static_cast<int>(b);
        }
      }
    }
    if (chosen < 0) {
      chosen = static_cast<int>(remaining.size());
      remaining.push_back(instance.capacity);
    }
    remaining[static_cast<std::size_t>(chosen)] -= item;
    solution.assignment.push_back(chosen);
  }
  return solution;
}

}  // namespace redahd::cop
