#include "redahd/cop/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "redahd/cop/online_packing.hpp"
#include "redahd/error.hpp"

namespace redahd::cop {

namespace {

TspSolution nearest_neighbor(const TspInstance& x) {
  const std::size_t n = x.coords.size();
  TspSolution y;
  if (n == 0) return y;
  std::vector<bool> visited(n, false);
  std::size_t current = 0;
  visited[0] = true;
  y.tour.push_back(0);
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (visited[j]) continue;
      if (next == n || x.distances(current, j) < x.distances(current, next)) next = j;
    }
    visited[next] = true;
    y.tour.push_back(static_cast<int>(next));
    current = next;
  }
  return y;
}

// Offline packing sees the whole item set, so items go in non-increasing size
// order (stable on index).
BppSolution pack_offline(const BppInstance& x, bool best_fit) {
  std::vector<int> order(x.item_sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return x.item_sizes[static_cast<std::size_t>(a)] >
           x.item_sizes[static_cast<std::size_t>(b)];
  });
  BppSolution y;
  std::vector<double> remaining;
  for (int item : order) {
    const double size = x.item_sizes[static_cast<std::size_t>(item)];
    std::size_t chosen = remaining.size();
    for (std::size_t b = 0; b < remaining.size(); ++b) {
      if (remaining[b] < size) continue;
      if (chosen == remaining.size()) {
        chosen = b;
        if (!best_fit) break;
      } else if (remaining[b] < remaining[chosen]) {
        chosen = b;
      }
    }
    if (chosen == remaining.size()) {
      remaining.push_back(x.capacity);
      y.bins.emplace_back();
    }
    remaining[chosen] -= size;
    y.bins[chosen].push_back(item);
  }
  return y;
}

ObppSolution pack_online(const ObppInstance& x, bool best_fit) {
  if (best_fit) {
    return simulate_online_packing(x, [](double item, std::span<const double> rem) {
      std::vector<double> scores(rem.size());
      for (std::size_t b = 0; b < rem.size(); ++b) scores[b] = -(rem[b] - item);
      return scores;
    });
  }
  return simulate_online_packing(x, [](double, std::span<const double> rem) {
    std::vector<double> scores(rem.size());
    for (std::size_t b = 0; b < rem.size(); ++b) scores[b] = -static_cast<double>(b);
    return scores;
  });
}

std::vector<int> by_ratio(const std::vector<double>& values,
                          const std::vector<double>& weights) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    return values[ia] / weights[ia] > values[ib] / weights[ib];
  });
  return order;
}

KpSolution ratio_greedy(const KpInstance& x) {
  KpSolution y;
  double load = 0.0;
  for (int item : by_ratio(x.values, x.weights)) {
    const double w = x.weights[static_cast<std::size_t>(item)];
    if (load + w <= x.capacity) {
      load += w;
      y.items.push_back(item);
    }
  }
  return y;
}

// Items by value over mean weight; each goes to the first knapsack with room.
MkpSolution ratio_greedy(const MkpInstance& x) {
  const std::size_t m = x.constraints.size();
  const std::size_t n = x.values.size();
  std::vector<double> mean_weight(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) mean_weight[j] += x.weights(i, j);
    mean_weight[j] /= static_cast<double>(std::max<std::size_t>(m, 1));
  }
  MkpSolution y;
  y.knapsacks.resize(m);
  std::vector<double> load(m, 0.0);
  for (int item : by_ratio(x.values, mean_weight)) {
    const auto j = static_cast<std::size_t>(item);
    for (std::size_t i = 0; i < m; ++i) {
      if (load[i] + x.weights(i, j) <= x.constraints[i]) {
        load[i] += x.weights(i, j);
        y.knapsacks[i].push_back(item);
        break;
      }
    }
  }
  return y;
}

[[noreturn]] void incompatible(Baseline baseline, CopKind kind) {
  throw ContractError("baseline " + std::string(to_string(baseline)) +
                      " does not apply to " + std::string(to_string(kind)));
}

}  // namespace

std::string_view to_string(Baseline baseline) {
  switch (baseline) {
    case Baseline::NearestNeighbor: return "nearest_neighbor";
    case Baseline::BestFit: return "best_fit";
    case Baseline::FirstFit: return "first_fit";
    case Baseline::RatioGreedy: return "ratio_greedy";
  }
  return "unknown";
}

Baseline parse_baseline(std::string_view name) {
  for (auto b : {Baseline::NearestNeighbor, Baseline::BestFit, Baseline::FirstFit,
                 Baseline::RatioGreedy}) {
    if (to_string(b) == name) return b;
  }
  throw ParseError("unknown baseline '" + std::string(name) + "'");
}

bool is_compatible(Baseline baseline, CopKind kind) {
  switch (baseline) {
    case Baseline::NearestNeighbor: return kind == CopKind::Tsp;
    case Baseline::BestFit:
    case Baseline::FirstFit: return kind == CopKind::Bpp || kind == CopKind::Obpp;
    case Baseline::RatioGreedy: return kind == CopKind::Kp || kind == CopKind::Mkp;
  }
  return false;
}

std::vector<Baseline> baselines_for(CopKind kind) {
  std::vector<Baseline> out;
  for (auto b : {Baseline::NearestNeighbor, Baseline::BestFit, Baseline::FirstFit,
                 Baseline::RatioGreedy}) {
    if (is_compatible(b, kind)) out.push_back(b);
  }
  return out;
}

Solution baseline_solve(Baseline baseline, const Instance& instance) {
  const CopKind kind = kind_of(instance);
  if (!is_compatible(baseline, kind)) incompatible(baseline, kind);
  switch (baseline) {
    case Baseline::NearestNeighbor:
      return nearest_neighbor(std::get<TspInstance>(instance));
    case Baseline::BestFit:
    case Baseline::FirstFit: {
      const bool best = baseline == Baseline::BestFit;
      if (kind == CopKind::Bpp) return pack_offline(std::get<BppInstance>(instance), best);
      return pack_online(std::get<ObppInstance>(instance), best);
    }
    case Baseline::RatioGreedy:
      if (kind == CopKind::Kp) return ratio_greedy(std::get<KpInstance>(instance));
      return ratio_greedy(std::get<MkpInstance>(instance));
  }
  incompatible(baseline, kind);
}

}  // namespace redahd::cop
