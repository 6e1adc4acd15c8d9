#include "run_config.hpp"

#include "redahd/error.hpp"
#include "redahd/util/files.hpp"

namespace redahd::cli {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

fixtures::DesignerOptions designer_options(const nlohmann::json& j, std::uint64_t& seed) {
  fixtures::DesignerOptions o;
  for (const auto& [key, v] : j.items()) {
    if (key == "seed") seed = v.get<std::uint64_t>();
    else if (key == "reductions") o.reductions = v.get<std::vector<std::string>>();
    else if (key == "refinements") o.refinements = v.get<std::map<std::string, std::string>>();
    else if (key == "candidates") o.candidates = v.get<std::size_t>();
    else if (key == "malformed_every") o.malformed_every = v.get<std::size_t>();
    else throw ParseError("unknown designer key '" + key + "'");
  }
  return o;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw ParseError("run config must be a JSON object");
  RunConfig c;
  bool have_evolution = false, have_dataset = false;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "evolution") {
        c.evolution = evolution::evolution_config_from_json(v);
        have_evolution = true;
      } else if (key == "llm") {
        c.llm = llm::llm_config_from_json(v);
      } else if (key == "dataset") {
        c.dataset = resolve(base, v.get<std::string>());
        have_dataset = true;
      } else if (key == "output_dir") {
        c.output_dir = resolve(base, v.get<std::string>());
      } else if (key == "transcript") {
        c.transcript = resolve(base, v.get<std::string>());
      } else if (key == "runner") {
        c.runner = v.is_string() ? std::vector<std::string>{v.get<std::string>()}
                                 : v.get<std::vector<std::string>>();
        if (c.runner.empty()) throw ParseError("runner must not be empty");
      } else if (key == "designer") {
        c.designer = designer_options(v, c.designer_seed);
      } else {
        throw ParseError("unknown run config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("run config: ") + e.what());
  }
  if (!have_evolution) throw ParseError("run config needs an \"evolution\" section with a kind");
  if (!have_dataset) throw ParseError("run config needs a \"dataset\" path");
  evolution::validate(c.evolution);
  llm::validate(c.llm);
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(util::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_run_config(j, path.parent_path());
}

}  // namespace redahd::cli
