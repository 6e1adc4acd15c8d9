#include "redahd/fixtures/designer.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>

#include "redahd/sandbox/native.hpp"

namespace redahd::fixtures {

namespace {

using cop::CopKind;

const std::vector<std::string>& ladder(CopKind kind) {
  static const std::map<CopKind, std::vector<std::string>> rungs{
      {CopKind::Tsp, {"tsp.random", "tsp.index_order", "tsp.nearest_neighbor", "tsp.nn_2opt"}},
      {CopKind::Cvrp, {"cvrp.one_per_route", "cvrp.nearest_neighbor"}},
      {CopKind::Bpp,
       {"bpp.next_fit", "bpp.first_fit", "bpp.first_fit_decreasing", "bpp.best_fit_decreasing"}},
      {CopKind::Obpp, {"obpp.worst_fit", "obpp.first_fit", "obpp.best_fit"}},
      {CopKind::Kp, {"kp.weight_greedy", "kp.value_greedy", "kp.noisy_ratio", "kp.ratio_greedy"}},
      {CopKind::Mkp, {"mkp.noisy_ratio", "mkp.ratio_greedy"}},
  };
  return rungs.at(kind);
}

const char* signature(CopKind kind) {
  switch (kind) {
    case CopKind::Tsp: return "coord_matrix, distance_matrix";
    case CopKind::Cvrp: return "coord_matrix, distance_matrix, demands, capacity";
    case CopKind::Bpp: return "items, bins";
    case CopKind::Obpp: return "item_size, bin_caps";
    case CopKind::Kp: return "weights, values, capacity";
    case CopKind::Mkp: return "values, weights, constraints";
  }
  return "";
}

bool contains(const std::string& s, const char* needle) { return s.find(needle) != std::string::npos; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

ScriptedDesigner::ScriptedDesigner(CopKind kind, std::uint64_t seed, DesignerOptions options)
    : kind_(kind), options_(std::move(options)), rng_(seed) {
  if (options_.reductions.empty())
    options_.reductions.push_back(std::string(cop::to_string(kind)) + ".identity");
}

llm::MockClient::Responder ScriptedDesigner::responder(std::shared_ptr<ScriptedDesigner> d) {
  return [d](const std::string& prompt) { return d->respond(prompt); };
}

std::optional<std::string> ScriptedDesigner::respond(const std::string& prompt) {
  std::lock_guard lock(mutex_);
  if (contains(prompt, "Please help me devise")) return candidates(prompt);
  if (contains(prompt, "Implement 2 Python functions")) {
    static const std::regex which(R"(Problem B: Problem B(\d+) involves)");
    std::smatch m;
    std::size_t k = 0;
    if (std::regex_search(prompt, m, which)) k = std::stoul(m[1].str()) - 1;
    return reduction_code(options_.reductions[k % options_.reductions.size()]);
  }
  if (contains(prompt, "fill in the blanks of the following Python function template"))
    return template_code();
  if (contains(prompt, "help me modify the following code")) {
    auto marker = sandbox::find_native_marker(prompt);
    std::string name = marker ? marker->name : options_.reductions.front();
    if (auto it = options_.refinements.find(name); it != options_.refinements.end())
      name = it->second;
    return reduction_code(name);
  }
  if (contains(prompt, "I need help design a novel efficient algorithm")) return heuristic(prompt, 0);
  if (contains(prompt, "I have 2 existing algorithms")) return heuristic(prompt, 2);
  if (contains(prompt, "I have one algorithm with its code")) return heuristic(prompt, 1);
  return std::nullopt;
}

std::string ScriptedDesigner::candidates(const std::string& prompt) {
  static const std::regex count(R"(devise (\d+) different)");
  std::smatch m;
  std::size_t n = 1;
  if (std::regex_search(prompt, m, count)) n = std::stoul(m[1].str());
  if (options_.candidates > 0) n = options_.candidates;
  std::string out;
  for (std::size_t i = 1; i <= n; ++i)
    out += "{{Problem B" + std::to_string(i) +
           " involves a simplified selection problem over the same data, variant " +
           std::to_string(i) + ".}}\n";
  return out;
}

std::string ScriptedDesigner::reduction_code(const std::string& marker) const {
  const std::string sig = signature(kind_);
  return "```python\nimport numpy as np\nfrom typing import Tuple\n\n# native: " + marker +
         "\ndef convert_input_A_to_B(" + sig + "):\n    input_B = (" + sig +
         ")\n    return input_B\n\n\ndef convert_solution_B_to_A(solution_B):\n"
         "    return solution_B\n```\n";
}

std::string ScriptedDesigner::template_code() const {
  const std::string sig = signature(kind_);
  return "```python\nfrom typing import Tuple\n\ndef solve_B(" + sig +
         "):\n    '''\n    Args:\n    " + sig +
         ": the components of input_B.\n\n    Returns:\n    solution_B: the value passed to "
         "convert_solution_B_to_A.\n    '''\n\n    return solution_B\n```\n";
}

std::string ScriptedDesigner::marker_for(std::size_t rung) {
  const auto& name = ladder(kind_)[rung];
  std::string params;
  if (name.find("noisy") != std::string::npos) params = " seed=" + std::to_string(next_seed_++);
  if (name == "tsp.random") params = " seed=" + std::to_string(next_seed_++);
  if (name == "tsp.nearest_neighbor") params = " start=" + std::to_string(rng_.uniform_int(0, 4));
  return name + params;
}

std::string ScriptedDesigner::heuristic(const std::string& prompt, int mode) {
  const auto& rungs = ladder(kind_);
  const auto top = static_cast<std::int64_t>(rungs.size()) - 1;

  // Parent rungs and jitters, in order of appearance.
  static const std::regex marker(R"(# native: (\S+)([^\n]*))");
  std::vector<std::int64_t> parent_rungs;
  std::vector<double> parent_jitter;
  for (auto it = std::sregex_iterator(prompt.begin(), prompt.end(), marker); it != std::sregex_iterator(); ++it) {
    const auto pos = std::find(rungs.begin(), rungs.end(), (*it)[1].str());
    if (pos == rungs.end()) continue;
    parent_rungs.push_back(pos - rungs.begin());
    const auto parsed = sandbox::find_native_marker((*it)[0].str());
    parent_jitter.push_back(sandbox::param_or(parsed->params, "jitter", 0.5));
  }

  std::int64_t rung = 0;
  double jitter = rng_.uniform(0.2, 0.8);
  if (mode == 0 || parent_rungs.empty()) {
    rung = rng_.uniform_int(0, std::max<std::int64_t>(top - 1, 0));
  } else if (mode == 2) {
    rung = *std::max_element(parent_rungs.begin(), parent_rungs.end()) + rng_.uniform_int(0, 1);
    jitter = *std::min_element(parent_jitter.begin(), parent_jitter.end()) * rng_.uniform(0.5, 1.0);
  } else {
    rung = parent_rungs.front() + rng_.uniform_int(-1, 1);
    jitter = parent_jitter.front() * rng_.uniform(0.5, 1.0);
  }
  rung = std::clamp<std::int64_t>(rung, 0, top);

  std::string m = marker_for(static_cast<std::size_t>(rung));
  if (m.find("noisy") != std::string::npos) m += " jitter=" + fmt(jitter);

  ++heuristics_;
  const bool malformed = options_.malformed_every > 0 && heuristics_ % options_.malformed_every == 0;
  std::string out;
  if (!malformed)
    out += "{Build the answer with the " + rungs[static_cast<std::size_t>(rung)] +
           " rule, variant " + std::to_string(heuristics_) + ".}\n\n";
  out += "```python\nimport numpy as np\n\n# native: " + m + "\ndef solve_B(" + signature(kind_) +
         "):\n    solution_B = None\n    return solution_B\n```\n";
  return out;
}

std::shared_ptr<llm::MockClient> scripted_client(CopKind kind, std::uint64_t seed,
                                                 DesignerOptions options) {
  auto client = std::make_shared<llm::MockClient>(llm::ChatParams{"scripted", 1.0});
  client->fallback(
      ScriptedDesigner::responder(std::make_shared<ScriptedDesigner>(kind, seed, std::move(options))));
  return client;
}

}  // namespace redahd::fixtures
