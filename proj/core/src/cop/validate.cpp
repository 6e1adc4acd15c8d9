#include "redahd/cop/validate.hpp"

#include <algorithm>
#include <string>

#include "redahd/error.hpp"

namespace redahd::cop {

namespace {

// Absolute slack on capacity comparisons. Sums of the same doubles in a
// different order may differ in the last bits; anything beyond this is a real
// overload.
constexpr double kCapacityTolerance = 1e-9;

bool exceeds(double load, double capacity) {
  return load > capacity + kCapacityTolerance * std::max(1.0, capacity);
}

class Reporter {
 public:
  void add(ViolationCode code, std::string detail, std::vector<int> indices = {}) {
    report_.violations.push_back({code, std::move(detail), std::move(indices)});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

// Counts occurrences of ids in [lo, hi]; records out-of-range ids and
// duplicates. Returns per-id counts indexed from lo.
std::vector<int> tally(const std::vector<int>& ids, int lo, int hi,
                       std::string_view what, Reporter& reporter) {
  std::vector<int> counts(static_cast<std::size_t>(std::max(0, hi - lo + 1)), 0);
  for (int id : ids) {
    if (id < lo || id > hi) {
      reporter.add(ViolationCode::IndexOutOfRange,
                   std::string(what) + " " + std::to_string(id) + " out of range",
                   {id});
      continue;
    }
    ++counts[static_cast<std::size_t>(id - lo)];
  }
  std::vector<int> duplicated;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] > 1) duplicated.push_back(static_cast<int>(k) + lo);
  }
  if (!duplicated.empty()) {
    reporter.add(ViolationCode::DuplicateIndex,
                 std::string(what) + " visited or selected more than once",
                 duplicated);
  }
  return counts;
}

void require_all(const std::vector<int>& counts, int lo, std::string_view what,
                 Reporter& reporter) {
  std::vector<int> missing;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) missing.push_back(static_cast<int>(k) + lo);
  }
  if (!missing.empty()) {
    reporter.add(ViolationCode::MissingIndex,
                 std::string(what) + " never visited or packed", missing);
  }
}

void check(const TspInstance& x, const TspSolution& y, Reporter& r) {
  const int n = static_cast<int>(x.coords.size());
  if (static_cast<int>(y.tour.size()) != n) {
    r.add(ViolationCode::WrongLength,
          "tour has " + std::to_string(y.tour.size()) + " entries, expected " +
              std::to_string(n));
  }
  auto counts = tally(y.tour, 0, n - 1, "node", r);
  require_all(counts, 0, "node", r);
}

void check(const CvrpInstance& x, const CvrpSolution& y, Reporter& r) {
  const int n = static_cast<int>(x.demands.size()) - 1;
  std::vector<int> all;
  for (std::size_t k = 0; k < y.routes.size(); ++k) {
    const auto& route = y.routes[k];
    if (route.empty()) {
      r.add(ViolationCode::EmptyRoute, "sub-route " + std::to_string(k) + " is empty",
            {static_cast<int>(k)});
      continue;
    }
    double load = 0.0;
    for (int c : route) {
      if (c >= 1 && c <= n) load += x.demands[static_cast<std::size_t>(c)];
      all.push_back(c);
    }
    if (exceeds(load, x.capacity)) {
      r.add(ViolationCode::CapacityExceeded,
            "sub-route " + std::to_string(k) + " demand " + std::to_string(load) +
                " > capacity " + std::to_string(x.capacity),
            {static_cast<int>(k)});
    }
  }
  auto counts = tally(all, 1, n, "customer", r);
  require_all(counts, 1, "customer", r);
}

void check(const BppInstance& x, const BppSolution& y, Reporter& r) {
  const int n = static_cast<int>(x.item_sizes.size());
  std::vector<int> all;
  for (std::size_t b = 0; b < y.bins.size(); ++b) {
    const auto& bin = y.bins[b];
    if (bin.empty()) {
      r.add(ViolationCode::EmptyRoute, "bin " + std::to_string(b) + " is empty",
            {static_cast<int>(b)});
      continue;
    }
    double load = 0.0;
    for (int item : bin) {
      if (item >= 0 && item < n) load += x.item_sizes[static_cast<std::size_t>(item)];
      all.push_back(item);
    }
    if (exceeds(load, x.capacity)) {
      r.add(ViolationCode::CapacityExceeded,
            "bin " + std::to_string(b) + " load " + std::to_string(load) +
                " > capacity " + std::to_string(x.capacity),
            {static_cast<int>(b)});
    }
  }
  auto counts = tally(all, 0, n - 1, "item", r);
  require_all(counts, 0, "item", r);
}

void check(const ObppInstance& x, const ObppSolution& y, Reporter& r) {
  const std::size_t n = x.item_stream.size();
  if (y.assignment.size() != n) {
    r.add(ViolationCode::WrongLength,
          "assignment has " + std::to_string(y.assignment.size()) +
              " entries, expected " + std::to_string(n));
  }
  std::vector<double> loads;
  for (std::size_t i = 0; i < std::min(n, y.assignment.size()); ++i) {
    const int bin = y.assignment[i];
    if (bin < 0) {
      r.add(ViolationCode::IndexOutOfRange,
            "item " + std::to_string(i) + " assigned to negative bin",
            {static_cast<int>(i)});
      continue;
    }
    if (static_cast<std::size_t>(bin) > loads.size()) {
      r.add(ViolationCode::BinNotOpened,
            "item " + std::to_string(i) + " assigned to bin " + std::to_string(bin) +
                " before bin " + std::to_string(loads.size()) + " was opened",
            {static_cast<int>(i)});
      continue;
    }
    if (static_cast<std::size_t>(bin) == loads.size()) loads.push_back(0.0);
    const double before = loads[static_cast<std::size_t>(bin)];
    const double size = x.item_stream[i];
    if (exceeds(before + size, x.capacity)) {
      r.add(ViolationCode::CapacityExceeded,
            "bin " + std::to_string(bin) + " lacks capacity for item " +
                std::to_string(i),
            {static_cast<int>(i), bin});
    }
    loads[static_cast<std::size_t>(bin)] = before + size;
  }
}

void check(const KpInstance& x, const KpSolution& y, Reporter& r) {
  const int n = static_cast<int>(x.weights.size());
  tally(y.items, 0, n - 1, "item", r);
  double load = 0.0;
  for (int item : y.items) {
    if (item >= 0 && item < n) load += x.weights[static_cast<std::size_t>(item)];
  }
  if (exceeds(load, x.capacity)) {
    r.add(ViolationCode::CapacityExceeded,
          "total weight " + std::to_string(load) + " > capacity " +
              std::to_string(x.capacity));
  }
}

void check(const MkpInstance& x, const MkpSolution& y, Reporter& r) {
  const int n = static_cast<int>(x.values.size());
  const std::size_t m = x.constraints.size();
  if (y.knapsacks.size() != m) {
    r.add(ViolationCode::WrongKnapsackCount,
          "solution lists " + std::to_string(y.knapsacks.size()) +
              " knapsacks, expected " + std::to_string(m));
  }
  std::vector<int> all;
  for (std::size_t k = 0; k < y.knapsacks.size(); ++k) {
    double load = 0.0;
    for (int item : y.knapsacks[k]) {
      if (k < m && item >= 0 && item < n) {
        load += x.weights(k, static_cast<std::size_t>(item));
      }
      all.push_back(item);
    }
    if (k < m && exceeds(load, x.constraints[k])) {
      r.add(ViolationCode::CapacityExceeded,
            "knapsack " + std::to_string(k) + " weight " + std::to_string(load) +
                " > capacity " + std::to_string(x.constraints[k]),
            {static_cast<int>(k)});
    }
  }
  tally(all, 0, n - 1, "item", r);
}

}  // namespace

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::WrongLength: return "wrong_length";
    case ViolationCode::IndexOutOfRange: return "index_out_of_range";
    case ViolationCode::DuplicateIndex: return "duplicate_index";
    case ViolationCode::MissingIndex: return "missing_index";
    case ViolationCode::CapacityExceeded: return "capacity_exceeded";
    case ViolationCode::EmptyRoute: return "empty_route";
    case ViolationCode::BinNotOpened: return "bin_not_opened";
    case ViolationCode::WrongKnapsackCount: return "wrong_knapsack_count";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [code](const Violation& v) { return v.code == code; });
}

ValidationReport validate(const Instance& instance, const Solution& solution) {
  if (kind_of(instance) != kind_of(solution)) {
    throw ContractError("validate: instance is " +
                        std::string(to_string(kind_of(instance))) +
                        " but solution is " +
                        std::string(to_string(kind_of(solution))));
  }
  Reporter reporter;
  std::visit(
      [&](const auto& x) {
        using I = std::decay_t<decltype(x)>;
        constexpr std::size_t index = [] {
          if constexpr (std::is_same_v<I, TspInstance>) return 0;
          else if constexpr (std::is_same_v<I, CvrpInstance>) return 1;
          else if constexpr (std::is_same_v<I, BppInstance>) return 2;
          else if constexpr (std::is_same_v<I, ObppInstance>) return 3;
          else if constexpr (std::is_same_v<I, KpInstance>) return 4;
          else return 5;
        }();
        check(x, std::get<index>(solution), reporter);
      },
      instance);
  return reporter.take();
}

}  // namespace redahd::cop
