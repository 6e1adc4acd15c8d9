#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "redahd/cop/online_packing.hpp"
#include "redahd/cop/types.hpp"
#include "redahd/error.hpp"
#include "redahd/sandbox/protocol.hpp"

// In-process stand-in for the Python runner. Code text selects a registered
// C++ implementation through a marker comment:
//
//   # native: tsp.nearest_neighbor
//   # native: kp.noisy_ratio seed=4 jitter=0.25
//
// The surrounding code must still define the protocol's entry points, as it
// would have to for the real runner.
namespace redahd::sandbox {

using NativeParams = std::map<std::string, std::string>;

struct NativeMarker {
  std::string name;
  NativeParams params;
};

// First "# native: name k=v ..." line in the code, if any.
std::optional<NativeMarker> find_native_marker(std::string_view code);

double param_or(const NativeParams& params, const std::string& key, double fallback);

// Raised by native guest code to report a per-instance failure.
class GuestFailure : public Error {
 public:
  GuestFailure(ErrorClass c, const std::string& what) : Error(what), error_class(c) {}
  ErrorClass error_class;
};

// Problem B is represented with cop types: f maps the root instance to some
// instance, g maps the solver's solution back. Online packing reductions map
// the per-item call instead.
struct NativeReduction {
  std::function<cop::Instance(const cop::Instance&)> instance_map;
  std::function<cop::Solution(const cop::Solution&)> solution_map;
  std::function<std::pair<double, std::vector<double>>(double, std::vector<double>)> online_map;
  std::function<std::vector<double>(std::vector<double>)> score_map;
};

struct NativeHeuristic {
  std::function<cop::Solution(const cop::Instance&)> solve;
  cop::PriorityScorer score;
  // Simulated guest run time charged per instance against the batch budget.
  double cost_seconds = 0.0;
};

class NativeRegistry {
 public:
  using ReductionFactory = std::function<NativeReduction(const NativeParams&)>;
  using HeuristicFactory = std::function<NativeHeuristic(const NativeParams&)>;

  void add_reduction(const std::string& name, ReductionFactory factory);
  void add_heuristic(const std::string& name, HeuristicFactory factory);

  bool has_reduction(const std::string& name) const { return reductions_.count(name) > 0; }
  bool has_heuristic(const std::string& name) const { return heuristics_.count(name) > 0; }

  // Throws Error for unknown names.
  NativeReduction make_reduction(const NativeMarker& marker) const;
  NativeHeuristic make_heuristic(const NativeMarker& marker) const;

 private:
  std::map<std::string, ReductionFactory> reductions_;
  std::map<std::string, HeuristicFactory> heuristics_;
};

class NativeSandbox : public Sandbox {
 public:
  explicit NativeSandbox(std::shared_ptr<const NativeRegistry> registry)
      : registry_(std::move(registry)) {}

  ExecResponse execute(const ExecRequest& request) override;

 private:
  std::shared_ptr<const NativeRegistry> registry_;
};

}  // namespace redahd::sandbox
