#include "redahd/cop/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "redahd/cop/objective.hpp"
#include "redahd/error.hpp"

namespace redahd::cop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_size(std::size_t n, std::size_t limit, CopKind kind) {
  if (n > limit) {
    throw ContractError("brute_force_optimum: " + std::string(to_string(kind)) +
                        " instance of size " + std::to_string(n) +
                        " exceeds limit " + std::to_string(limit));
  }
}

TspSolution solve(const TspInstance& x) {
  const std::size_t n = x.coords.size();
  TspSolution best;
  if (n <= 1) {
    best.tour.assign(n, 0);
    return best;
  }
  std::vector<int> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1);
  double best_len = kInf;
  do {
    double len = x.distances(0, static_cast<std::size_t>(rest.front()));
    for (std::size_t t = 0; t + 1 < rest.size(); ++t) {
      len += x.distances(static_cast<std::size_t>(rest[t]),
                         static_cast<std::size_t>(rest[t + 1]));
    }
    len += x.distances(static_cast<std::size_t>(rest.back()), 0);
    if (len < best_len) {
      best_len = len;
      best.tour.assign(1, 0);
      best.tour.insert(best.tour.end(), rest.begin(), rest.end());
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

// Every CVRP solution is a customer permutation cut into capacity-feasible
// segments, so enumerating permutations and splitting each optimally covers
// the whole space.
CvrpSolution solve(const CvrpInstance& x) {
  const std::size_t n = x.demands.size() - 1;
  CvrpSolution best;
  if (n == 0) return best;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  double best_cost = kInf;
  std::vector<double> cost(n + 1);
  std::vector<std::size_t> cut(n + 1);
  auto d = [&](int a, int b) {
    return x.distances(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  };
  do {
    // cost[k]: cheapest way to serve perm[0..k).
    std::fill(cost.begin(), cost.end(), kInf);
    cost[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (cost[k] == kInf) continue;
      double load = 0.0;
      double inner = 0.0;
      for (std::size_t e = k; e < n; ++e) {
        load += x.demands[static_cast<std::size_t>(perm[e])];
        if (load > x.capacity) break;
        if (e > k) inner += d(perm[e - 1], perm[e]);
        const double route = d(0, perm[k]) + inner + d(perm[e], 0);
        if (cost[k] + route < cost[e + 1]) {
          cost[e + 1] = cost[k] + route;
          cut[e + 1] = k;
        }
      }
    }
    if (cost[n] < best_cost) {
      best_cost = cost[n];
      best.routes.clear();
      for (std::size_t e = n; e > 0; e = cut[e]) {
        best.routes.emplace_back(perm.begin() + static_cast<long>(cut[e]),
                                 perm.begin() + static_cast<long>(e));
      }
      std::reverse(best.routes.begin(), best.routes.end());
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best_cost == kInf) throw ContractError("brute_force_optimum: CVRP instance infeasible");
  return best;
}

// Minimum bin count partition. Bins are opened in order, so each partition is
// enumerated once.
std::vector<std::vector<int>> min_bins(const std::vector<double>& sizes, double capacity) {
  const std::size_t n = sizes.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)];
  });
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    suffix[k] = suffix[k + 1] + sizes[static_cast<std::size_t>(order[k])];
  }

  std::size_t best_count = n + 1;
  std::vector<int> best_assign;
  std::vector<int> assign(n, -1);
  std::vector<double> load;

  auto dfs = [&](auto&& self, std::size_t k) -> void {
    if (load.size() >= best_count) return;
    if (k == n) {
      best_count = load.size();
      best_assign = assign;
      return;
    }
    double free_space = 0.0;
    for (double l : load) free_space += capacity - l;
    const double overflow = suffix[k] - free_space;
    if (overflow > 0 &&
        load.size() + static_cast<std::size_t>(std::ceil(overflow / capacity - 1e-12)) >=
            best_count) {
      return;
    }
    const double s = sizes[static_cast<std::size_t>(order[k])];
    for (std::size_t b = 0; b < load.size(); ++b) {
      if (load[b] + s > capacity) continue;
      load[b] += s;
      assign[k] = static_cast<int>(b);
      self(self, k + 1);
      load[b] -= s;
    }
    load.push_back(s);
    assign[k] = static_cast<int>(load.size() - 1);
    self(self, k + 1);
    load.pop_back();
  };
  dfs(dfs, 0);

  std::vector<std::vector<int>> bins(best_count);
  for (std::size_t k = 0; k < n; ++k) {
    bins[static_cast<std::size_t>(best_assign[k])].push_back(order[k]);
  }
  for (auto& bin : bins) std::sort(bin.begin(), bin.end());
  std::sort(bins.begin(), bins.end());
  return bins;
}

BppSolution solve(const BppInstance& x) { return {min_bins(x.item_sizes, x.capacity)}; }

ObppSolution solve(const ObppInstance& x) {
  const auto bins = min_bins(x.item_stream, x.capacity);
  std::vector<int> owner(x.item_stream.size(), -1);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    for (int item : bins[b]) owner[static_cast<std::size_t>(item)] = static_cast<int>(b);
  }
  // Renumber bins by first arrival.
  std::vector<int> renumber(bins.size(), -1);
  int next = 0;
  ObppSolution y;
  for (int b : owner) {
    auto& id = renumber[static_cast<std::size_t>(b)];
    if (id < 0) id = next++;
    y.assignment.push_back(id);
  }
  return y;
}

KpSolution solve(const KpInstance& x) {
  const std::size_t n = x.weights.size();
  double best_value = -1.0;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double w = 0.0;
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        w += x.weights[j];
        v += x.values[j];
      }
    }
    if (w <= x.capacity && v > best_value) {
      best_value = v;
      best_mask = mask;
    }
  }
  KpSolution y;
  for (std::size_t j = 0; j < n; ++j) {
    if (best_mask & (1u << j)) y.items.push_back(static_cast<int>(j));
  }
  return y;
}

MkpSolution solve(const MkpInstance& x) {
  const std::size_t n = x.values.size();
  const std::size_t m = x.constraints.size();
  if (std::pow(static_cast<double>(m + 1), static_cast<double>(n)) > std::pow(4.0, 15.0)) {
    throw ContractError("brute_force_optimum: MKP search space too large");
  }
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) suffix[j] = suffix[j + 1] + x.values[j];

  std::vector<int> assign(n, -1);  // -1: not selected
  std::vector<int> best_assign(n, -1);
  std::vector<double> load(m, 0.0);
  double best_value = 0.0;

  auto dfs = [&](auto&& self, std::size_t j, double value) -> void {
    if (value + suffix[j] <= best_value) return;
    if (j == n) {
      best_value = value;
      best_assign = assign;
      return;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (load[i] + x.weights(i, j) > x.constraints[i]) continue;
      load[i] += x.weights(i, j);
      assign[j] = static_cast<int>(i);
      self(self, j + 1, value + x.values[j]);
      load[i] -= x.weights(i, j);
    }
    assign[j] = -1;
    self(self, j + 1, value);
  };
  dfs(dfs, 0, 0.0);

  MkpSolution y;
  y.knapsacks.resize(m);
  for (std::size_t j = 0; j < n; ++j) {
    if (best_assign[j] >= 0) {
      y.knapsacks[static_cast<std::size_t>(best_assign[j])].push_back(static_cast<int>(j));
    }
  }
  return y;
}

}  // namespace

OptimalSolution brute_force_optimum(const Instance& instance) {
  const CopKind kind = kind_of(instance);
  const std::size_t n = size_of(instance);
  const bool routing = kind == CopKind::Tsp || kind == CopKind::Cvrp;
  require_size(n, routing ? kMaxBruteForceRouting : kMaxBruteForceItems, kind);

  OptimalSolution out;
  out.solution = std::visit([](const auto& x) -> Solution { return solve(x); }, instance);
  out.objective = objective(instance, out.solution);
  return out;
}

}  // namespace redahd::cop
