#include "redahd/cop/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "redahd/cop/validate.hpp"
#include "redahd/error.hpp"

namespace redahd::cop {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

double value(const TspInstance& x, const TspSolution& y) {
  const auto& tour = y.tour;
  if (tour.empty()) return 0.0;
  double length = 0.0;
  for (std::size_t t = 0; t + 1 < tour.size(); ++t) {
    length += x.distances(at(tour[t]), at(tour[t + 1]));
  }
  length += x.distances(at(tour.back()), at(tour.front()));
  return -length;
}

double value(const CvrpInstance& x, const CvrpSolution& y) {
  double cost = 0.0;
  for (const auto& route : y.routes) {
    int prev = 0;
    for (int c : route) {
      cost += x.distances(at(prev), at(c));
      prev = c;
    }
    cost += x.distances(at(prev), 0);
  }
  return -cost;
}

double value(const BppInstance&, const BppSolution& y) {
  const auto used = std::count_if(y.bins.begin(), y.bins.end(),
                                  [](const auto& bin) { return !bin.empty(); });
  return -static_cast<double>(used);
}

double value(const ObppInstance&, const ObppSolution& y) {
  if (y.assignment.empty()) return 0.0;
  return -static_cast<double>(
      *std::max_element(y.assignment.begin(), y.assignment.end()) + 1);
}

double value(const KpInstance& x, const KpSolution& y) {
  double total = 0.0;
  for (int item : y.items) total += x.values[at(item)];
  return total;
}

double value(const MkpInstance& x, const MkpSolution& y) {
  double total = 0.0;
  for (const auto& knapsack : y.knapsacks) {
    for (int item : knapsack) total += x.values[at(item)];
  }
  return total;
}

}  // namespace

double objective_unchecked(const Instance& instance, const Solution& solution) {
  if (kind_of(instance) != kind_of(solution)) {
    throw ContractError("objective: instance/solution kind mismatch");
  }
  return std::visit(
      [&](const auto& x) -> double {
        using I = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<I, TspInstance>) {
          return value(x, std::get<TspSolution>(solution));
        } else if constexpr (std::is_same_v<I, CvrpInstance>) {
          return value(x, std::get<CvrpSolution>(solution));
        } else if constexpr (std::is_same_v<I, BppInstance>) {
          return value(x, std::get<BppSolution>(solution));
        } else if constexpr (std::is_same_v<I, ObppInstance>) {
          return value(x, std::get<ObppSolution>(solution));
        } else if constexpr (std::is_same_v<I, KpInstance>) {
          return value(x, std::get<KpSolution>(solution));
        } else {
          return value(x, std::get<MkpSolution>(solution));
        }
      },
      instance);
}

double objective(const Instance& instance, const Solution& solution) {
  const auto report = validate(instance, solution);
  if (!report.valid()) {
    throw ContractError("objective: solution is invalid (" +
                        std::string(to_string(report.violations.front().code)) +
                        ": " + report.violations.front().detail + ")");
  }
  return objective_unchecked(instance, solution);
}

Sense sense_of(CopKind kind) {
  return is_minimization(kind) ? Sense::Minimize : Sense::Maximize;
}

double optimality_gap(double value, double reference, Sense sense) {
  if (!(reference > 0.0)) {
    throw ContractError("optimality_gap: reference must be positive, got " +
                        std::to_string(reference));
  }
  const double delta = sense == Sense::Minimize ? value - reference : reference - value;
  return 100.0 * delta / reference;
}

double bin_lower_bound(const std::vector<double>& sizes, double capacity) {
  if (!(capacity > 0.0)) throw ContractError("bin_lower_bound: capacity must be positive");
  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  return std::ceil(total / capacity);
}

}  // namespace redahd::cop
