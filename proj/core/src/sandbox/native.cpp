#include "redahd/sandbox/native.hpp"

#include <chrono>
#include <cmath>
#include <regex>
#include <sstream>

#include "redahd/cop/serialize.hpp"

namespace redahd::sandbox {

std::optional<NativeMarker> find_native_marker(std::string_view code) {
  static const std::regex re(R"(#[ \t]*native:[ \t]*([A-Za-z0-9_.]+)([^\n]*))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(code.begin(), code.end(), m, re)) return std::nullopt;
  NativeMarker marker;
  marker.name = m[1].str();
  std::istringstream rest(m[2].str());
  std::string token;
  while (rest >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    marker.params[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return marker;
}

double param_or(const NativeParams& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw Error("native parameter " + key + "=" + it->second + " is not a number");
  }
}

void NativeRegistry::add_reduction(const std::string& name, ReductionFactory factory) {
  reductions_[name] = std::move(factory);
}

void NativeRegistry::add_heuristic(const std::string& name, HeuristicFactory factory) {
  heuristics_[name] = std::move(factory);
}

NativeReduction NativeRegistry::make_reduction(const NativeMarker& marker) const {
  auto it = reductions_.find(marker.name);
  if (it == reductions_.end()) throw Error("unknown native reduction '" + marker.name + "'");
  return it->second(marker.params);
}

NativeHeuristic NativeRegistry::make_heuristic(const NativeMarker& marker) const {
  auto it = heuristics_.find(marker.name);
  if (it == heuristics_.end()) throw Error("unknown native heuristic '" + marker.name + "'");
  NativeHeuristic h = it->second(marker.params);
  h.cost_seconds = param_or(marker.params, "cost", h.cost_seconds);
  return h;
}

namespace {

bool defines(const std::string& code, const std::string& name) {
  const std::regex def("(^|\\n)[ \\t]*def[ \\t]+" + name + "[ \\t]*\\(");
  return std::regex_search(code, def);
}

InstanceOutcome run_offline(const NativeReduction& red, const NativeHeuristic& heur,
                            const cop::Instance& x) {
  const cop::Instance b = red.instance_map ? red.instance_map(x) : x;
  if (!heur.solve) throw GuestFailure(ErrorClass::Exception, "solve_B is not an offline solver");
  const cop::Solution yb = heur.solve(b);
  const cop::Solution y = red.solution_map ? red.solution_map(yb) : yb;
  return {cop::solution_to_json(y), std::nullopt};
}

InstanceOutcome run_online(const NativeReduction& red, const NativeHeuristic& heur,
                           const cop::Instance& x) {
  if (!heur.score) throw GuestFailure(ErrorClass::Exception, "solve_B is not a priority function");
  auto scorer = [&](double item, std::span<const double> caps) {
    std::vector<double> c(caps.begin(), caps.end());
    auto [bi, bc] = red.online_map ? red.online_map(item, c) : std::pair{item, c};
    std::vector<double> s = heur.score(bi, bc);
    if (red.score_map) s = red.score_map(std::move(s));
    if (s.size() != caps.size()) {
      throw GuestFailure(ErrorClass::BadShape, "expected " + std::to_string(caps.size()) +
                                                   " scores, got " + std::to_string(s.size()));
    }
    for (double v : s) {
      if (!std::isfinite(v)) throw GuestFailure(ErrorClass::NonFinite, "non-finite score");
    }
    return s;
  };
  const auto y = cop::simulate_online_packing(std::get<cop::ObppInstance>(x), scorer);
  return {cop::solution_to_json(y), std::nullopt};
}

}  // namespace

ExecResponse NativeSandbox::execute(const ExecRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  ExecResponse r;
  r.request_id = request.request_id;
  auto finish = [&](BatchOutcome outcome, std::string error) {
    r.outcome = outcome;
    r.error = std::move(error);
    if (outcome != BatchOutcome::Completed) r.results.clear();
    r.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };

  // "Loading" the code.
  for (const auto& [code, name] :
       {std::pair{&request.reduction_code, &request.entries.instance_map},
        std::pair{&request.reduction_code, &request.entries.solution_map},
        std::pair{&request.heuristic_code, &request.entries.solve}}) {
    if (!defines(*code, *name)) {
      return finish(BatchOutcome::Crashed, "load error: " + *name + " is not defined");
    }
  }
  const auto red_marker = find_native_marker(request.reduction_code);
  const auto heur_marker = find_native_marker(request.heuristic_code);
  if (!red_marker || !heur_marker) {
    return finish(BatchOutcome::Crashed, "load error: no native marker in code");
  }
  NativeReduction red;
  NativeHeuristic heur;
  try {
    red = registry_->make_reduction(*red_marker);
    heur = registry_->make_heuristic(*heur_marker);
  } catch (const std::exception& e) {
    return finish(BatchOutcome::Crashed, std::string("load error: ") + e.what());
  }

  double charged = 0.0;
  const bool online = protocol_for(request.kind) == Protocol::OnlinePacking;
  for (const auto& x : request.instances) {
    charged += heur.cost_seconds;
    if (charged > request.timeout_seconds) {
      return finish(BatchOutcome::Timeout,
                    "batch exceeded " + std::to_string(request.timeout_seconds) + "s");
    }
    try {
      r.results.push_back(online ? run_online(red, heur, x) : run_offline(red, heur, x));
    } catch (const GuestFailure& e) {
      r.results.push_back({std::nullopt, GuestError{e.error_class, e.what(), ""}});
    } catch (const std::exception& e) {
      r.results.push_back({std::nullopt, GuestError{ErrorClass::Exception, e.what(), ""}});
    }
  }
  return finish(BatchOutcome::Completed, "");
}

}  // namespace redahd::sandbox
