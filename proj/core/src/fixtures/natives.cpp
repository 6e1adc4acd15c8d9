#include "redahd/fixtures/natives.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "redahd/cop/baselines.hpp"
#include "redahd/util/random.hpp"

namespace redahd::fixtures {

using namespace redahd::cop;
using sandbox::ErrorClass;
using sandbox::GuestFailure;
using sandbox::NativeHeuristic;
using sandbox::NativeParams;
using sandbox::NativeReduction;
using sandbox::param_or;

namespace {

template <typename T>
const T& as(const Instance& x) {
  if (const T* p = std::get_if<T>(&x)) return *p;
  throw GuestFailure(ErrorClass::Exception, "TypeError: unexpected input for solve_B");
}

template <typename T>
const T& as(const Solution& y) {
  if (const T* p = std::get_if<T>(&y)) return *p;
  throw GuestFailure(ErrorClass::Exception, "TypeError: unexpected solution for convert_solution_B_to_A");
}

double dist(const Matrix& d, int a, int b) {
  return d(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
}

std::vector<int> nn_tour(const TspInstance& x, int start) {
  const int n = static_cast<int>(x.coords.size());
  std::vector<int> tour;
  if (n == 0) return tour;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int cur = std::clamp(start, 0, n - 1);
  seen[static_cast<std::size_t>(cur)] = true;
  tour.push_back(cur);
  for (int step = 1; step < n; ++step) {
    int next = -1;
    for (int j = 0; j < n; ++j) {
      if (seen[static_cast<std::size_t>(j)]) continue;
      if (next < 0 || dist(x.distances, cur, j) < dist(x.distances, cur, next)) next = j;
    }
    seen[static_cast<std::size_t>(next)] = true;
    tour.push_back(next);
    cur = next;
  }
  return tour;
}

void two_opt(const TspInstance& x, std::vector<int>& t) {
  const std::size_t n = t.size();
  if (n < 4) return;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 2 < n; ++i) {
      for (std::size_t k = i + 2; k < n; ++k) {
        const int a = t[i], b = t[i + 1], c = t[k], d = t[(k + 1) % n];
        if (a == d) continue;
        const double delta = dist(x.distances, a, c) + dist(x.distances, b, d) -
                             dist(x.distances, a, b) - dist(x.distances, c, d);
        if (delta < -1e-12) {
          std::reverse(t.begin() + static_cast<long>(i + 1), t.begin() + static_cast<long>(k + 1));
          improved = true;
        }
      }
    }
  }
}

// Per-instance stream so results do not depend on batch position.
util::Rng instance_rng(double seed, const std::vector<double>& data) {
  std::uint64_t h = static_cast<std::uint64_t>(seed) * 0x9E3779B97F4A7C15ULL;
  for (double v : data) h = h * 1099511628211ULL ^ static_cast<std::uint64_t>(v * 1e9);
  return util::Rng(h);
}

std::vector<int> ratio_order(const std::vector<double>& values, const std::vector<double>& weights,
                             util::Rng* rng, double jitter) {
  std::vector<double> key(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    key[j] = values[j] / weights[j];
    if (rng) key[j] *= 1.0 + jitter * rng->uniform(-1.0, 1.0);
  }
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return key[static_cast<std::size_t>(a)] > key[static_cast<std::size_t>(b)];
  });
  return order;
}

KpSolution kp_take(const KpInstance& x, const std::vector<int>& order) {
  KpSolution y;
  double load = 0.0;
  for (int j : order) {
    const double w = x.weights[static_cast<std::size_t>(j)];
    if (load + w <= x.capacity) {
      load += w;
      y.items.push_back(j);
    }
  }
  return y;
}

MkpSolution mkp_take(const MkpInstance& x, const std::vector<int>& order) {
  const std::size_t m = x.constraints.size();
  MkpSolution y;
  y.knapsacks.resize(m);
  std::vector<double> load(m, 0.0);
  for (int item : order) {
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

BppSolution pack(const BppInstance& x, bool decreasing, bool best) {
  std::vector<int> order(x.item_sizes.size());
  std::iota(order.begin(), order.end(), 0);
  if (decreasing) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return x.item_sizes[static_cast<std::size_t>(a)] > x.item_sizes[static_cast<std::size_t>(b)];
    });
  }
  BppSolution y;
  std::vector<double> rem;
  for (int item : order) {
    const double s = x.item_sizes[static_cast<std::size_t>(item)];
    std::size_t pick = rem.size();
    for (std::size_t b = 0; b < rem.size(); ++b) {
      if (rem[b] < s) continue;
      if (pick == rem.size() || (best && rem[b] < rem[pick])) pick = b;
      if (!best) break;
    }
    if (pick == rem.size()) {
      rem.push_back(x.capacity);
      y.bins.emplace_back();
    }
    rem[pick] -= s;
    y.bins[pick].push_back(item);
  }
  return y;
}

BppSolution next_fit(const BppInstance& x) {
  BppSolution y;
  double rem = -1.0;
  for (std::size_t j = 0; j < x.item_sizes.size(); ++j) {
    if (y.bins.empty() || rem < x.item_sizes[j]) {
      y.bins.emplace_back();
      rem = x.capacity;
    }
    rem -= x.item_sizes[j];
    y.bins.back().push_back(static_cast<int>(j));
  }
  return y;
}

NativeHeuristic solver(std::function<Solution(const Instance&)> f) {
  NativeHeuristic h;
  h.solve = std::move(f);
  return h;
}

NativeHeuristic scorer(PriorityScorer f) {
  NativeHeuristic h;
  h.score = std::move(f);
  return h;
}

}  // namespace

std::shared_ptr<sandbox::NativeRegistry> native_registry() {
  auto reg = std::make_shared<sandbox::NativeRegistry>();

  // --- reductions -------------------------------------------------------
  for (CopKind kind : kAllKinds) {
    reg->add_reduction(std::string(to_string(kind)) + ".identity",
                       [](const NativeParams&) { return NativeReduction{}; });
  }
  reg->add_reduction("tsp.drop_last", [](const NativeParams&) {
    NativeReduction r;
    r.solution_map = [](const Solution& y) -> Solution {
      auto tour = as<TspSolution>(y).tour;
      if (!tour.empty()) tour.pop_back();
      return TspSolution{tour};
    };
    return r;
  });
  reg->add_reduction("tsp.swap_pairs", [](const NativeParams&) {
    NativeReduction r;
    r.solution_map = [](const Solution& y) -> Solution {
      auto tour = as<TspSolution>(y).tour;
      for (std::size_t i = 0; i + 1 < tour.size(); i += 2) std::swap(tour[i], tour[i + 1]);
      return TspSolution{tour};
    };
    return r;
  });
  reg->add_reduction("kp.drop_best", [](const NativeParams&) {
    NativeReduction r;
    // f remembers the most valuable item of the instance it just mapped; g
    // removes it from the selection.
    auto best = std::make_shared<int>(-1);
    r.instance_map = [best](const Instance& x) -> Instance {
      const auto& kp = as<KpInstance>(x);
      *best = static_cast<int>(std::max_element(kp.values.begin(), kp.values.end()) -
                               kp.values.begin());
      return kp;
    };
    r.solution_map = [best](const Solution& y) -> Solution {
      auto items = as<KpSolution>(y).items;
      std::erase(items, *best);
      return KpSolution{items};
    };
    return r;
  });

  // --- tsp --------------------------------------------------------------
  reg->add_heuristic("tsp.nearest_neighbor", [](const NativeParams& p) {
    const int start = static_cast<int>(param_or(p, "start", 0));
    return solver([start](const Instance& x) -> Solution {
      return TspSolution{nn_tour(as<TspInstance>(x), start)};
    });
  });
  reg->add_heuristic("tsp.nn_2opt", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      const auto& t = as<TspInstance>(x);
      auto tour = nn_tour(t, 0);
      two_opt(t, tour);
      return TspSolution{tour};
    });
  });
  reg->add_heuristic("tsp.index_order", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      std::vector<int> tour(as<TspInstance>(x).coords.size());
      std::iota(tour.begin(), tour.end(), 0);
      return TspSolution{tour};
    });
  });
  reg->add_heuristic("tsp.random", [](const NativeParams& p) {
    const double seed = param_or(p, "seed", 0);
    return solver([seed](const Instance& x) -> Solution {
      const auto& t = as<TspInstance>(x);
      auto rng = instance_rng(seed, t.distances.data());
      std::vector<int> tour(t.coords.size());
      std::iota(tour.begin(), tour.end(), 0);
      for (std::size_t i = tour.size(); i > 1; --i) {
        std::swap(tour[i - 1], tour[static_cast<std::size_t>(
                                   rng.uniform_int(0, static_cast<std::int64_t>(i - 1)))]);
      }
      return TspSolution{tour};
    });
  });
  reg->add_heuristic("tsp.skip_last", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      auto tour = nn_tour(as<TspInstance>(x), 0);
      if (!tour.empty()) tour.pop_back();
      return TspSolution{tour};
    });
  });

  // --- cvrp -------------------------------------------------------------
  reg->add_heuristic("cvrp.nearest_neighbor", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      const auto& c = as<CvrpInstance>(x);
      const int n = static_cast<int>(c.demands.size());
      std::vector<bool> served(static_cast<std::size_t>(n), false);
      CvrpSolution y;
      int left = n - 1;
      while (left > 0) {
        std::vector<int> route;
        double load = 0.0;
        int cur = 0;
        while (true) {
          int next = -1;
          for (int j = 1; j < n; ++j) {
            if (served[static_cast<std::size_t>(j)] ||
                load + c.demands[static_cast<std::size_t>(j)] > c.capacity) {
              continue;
            }
            if (next < 0 || dist(c.distances, cur, j) < dist(c.distances, cur, next)) next = j;
          }
          if (next < 0) break;
          served[static_cast<std::size_t>(next)] = true;
          load += c.demands[static_cast<std::size_t>(next)];
          route.push_back(next);
          cur = next;
          --left;
        }
        if (route.empty()) throw GuestFailure(ErrorClass::Exception, "demand exceeds capacity");
        y.routes.push_back(std::move(route));
      }
      return y;
    });
  });
  reg->add_heuristic("cvrp.one_per_route", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      CvrpSolution y;
      for (std::size_t j = 1; j < as<CvrpInstance>(x).demands.size(); ++j) {
        y.routes.push_back({static_cast<int>(j)});
      }
      return y;
    });
  });

  // --- bpp --------------------------------------------------------------
  reg->add_heuristic("bpp.first_fit_decreasing", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution { return pack(as<BppInstance>(x), true, false); });
  });
  reg->add_heuristic("bpp.best_fit_decreasing", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution { return pack(as<BppInstance>(x), true, true); });
  });
  reg->add_heuristic("bpp.first_fit", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution { return pack(as<BppInstance>(x), false, false); });
  });
  reg->add_heuristic("bpp.next_fit", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution { return next_fit(as<BppInstance>(x)); });
  });

  // --- obpp -------------------------------------------------------------
  reg->add_heuristic("obpp.best_fit", [](const NativeParams&) {
    return scorer([](double item, std::span<const double> caps) {
      std::vector<double> s;
      for (double c : caps) s.push_back(-(c - item));
      return s;
    });
  });
  reg->add_heuristic("obpp.first_fit", [](const NativeParams&) {
    return scorer([](double, std::span<const double> caps) {
      std::vector<double> s;
      for (std::size_t b = 0; b < caps.size(); ++b) s.push_back(-static_cast<double>(b));
      return s;
    });
  });
  reg->add_heuristic("obpp.worst_fit", [](const NativeParams&) {
    return scorer([](double, std::span<const double> caps) {
      return std::vector<double>(caps.begin(), caps.end());
    });
  });
  reg->add_heuristic("obpp.bad_shape", [](const NativeParams&) {
    return scorer([](double, std::span<const double>) { return std::vector<double>{0.0}; });
  });
  reg->add_heuristic("obpp.nan", [](const NativeParams&) {
    return scorer([](double, std::span<const double> caps) {
      return std::vector<double>(caps.size(), std::nan(""));
    });
  });

  // --- kp / mkp ---------------------------------------------------------
  reg->add_heuristic("kp.ratio_greedy", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      const auto& k = as<KpInstance>(x);
      return kp_take(k, ratio_order(k.values, k.weights, nullptr, 0.0));
    });
  });
  reg->add_heuristic("kp.noisy_ratio", [](const NativeParams& p) {
    const double seed = param_or(p, "seed", 0);
    const double jitter = param_or(p, "jitter", 0.5);
    return solver([seed, jitter](const Instance& x) -> Solution {
      const auto& k = as<KpInstance>(x);
      auto rng = instance_rng(seed, k.weights);
      return kp_take(k, ratio_order(k.values, k.weights, &rng, jitter));
    });
  });
  reg->add_heuristic("kp.value_greedy", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      const auto& k = as<KpInstance>(x);
      return kp_take(k, ratio_order(k.values, std::vector<double>(k.values.size(), 1.0), nullptr, 0));
    });
  });
  reg->add_heuristic("kp.weight_greedy", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      const auto& k = as<KpInstance>(x);
      return kp_take(k, ratio_order(std::vector<double>(k.values.size(), 1.0), k.weights, nullptr, 0));
    });
  });
  reg->add_heuristic("kp.all_items", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      std::vector<int> all(as<KpInstance>(x).values.size());
      std::iota(all.begin(), all.end(), 0);
      return KpSolution{all};
    });
  });
  reg->add_heuristic("mkp.ratio_greedy", [](const NativeParams&) {
    return solver([](const Instance& x) -> Solution {
      return baseline_solve(Baseline::RatioGreedy, as<MkpInstance>(x));
    });
  });
  reg->add_heuristic("mkp.noisy_ratio", [](const NativeParams& p) {
    const double seed = param_or(p, "seed", 0);
    const double jitter = param_or(p, "jitter", 0.5);
    return solver([seed, jitter](const Instance& x) -> Solution {
      const auto& m = as<MkpInstance>(x);
      std::vector<double> mean(m.values.size(), 0.0);
      for (std::size_t j = 0; j < mean.size(); ++j) {
        for (std::size_t i = 0; i < m.weights.rows(); ++i) mean[j] += m.weights(i, j);
        mean[j] /= static_cast<double>(std::max<std::size_t>(m.weights.rows(), 1));
      }
      auto rng = instance_rng(seed, m.values);
      return mkp_take(m, ratio_order(m.values, mean, &rng, jitter));
    });
  });

  // --- failures ---------------------------------------------------------
  reg->add_heuristic("fail.raise", [](const NativeParams&) {
    NativeHeuristic h;
    h.solve = [](const Instance&) -> Solution {
      throw GuestFailure(ErrorClass::Exception, "ZeroDivisionError: division by zero");
    };
    h.score = [](double, std::span<const double>) -> std::vector<double> {
      throw GuestFailure(ErrorClass::Exception, "ZeroDivisionError: division by zero");
    };
    return h;
  });
  reg->add_heuristic("fail.raise_on", [](const NativeParams& p) {
    // Raises on the index-th instance of the batch (0-based); otherwise
    // behaves as the kind's identity-order solution.
    const auto index = static_cast<long>(param_or(p, "index", 0));
    auto counter = std::make_shared<std::atomic<long>>(0);
    return solver([index, counter](const Instance& x) -> Solution {
      if ((*counter)++ == index) {
        throw GuestFailure(ErrorClass::Exception, "ZeroDivisionError: division by zero");
      }
      std::vector<int> tour(as<TspInstance>(x).coords.size());
      std::iota(tour.begin(), tour.end(), 0);
      return TspSolution{tour};
    });
  });
  return reg;
}

}  // namespace redahd::fixtures
