#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "redahd/evolution/engine.hpp"
#include "redahd/fixtures/designer.hpp"
#include "redahd/llm/config.hpp"

// Run configuration file:
//
//   {
//     "evolution": {"kind": "kp", "population_size": 6, ...},   // EvolutionConfig
//     "llm": {"backend": "mock", "model": "...", ...},           // LlmConfig
//     "dataset": "data/kp.jsonl",           // relative to the config file
//     "output_dir": "runs/kp",              // relative to the config file
//     "transcript": "fixtures/kp.jsonl",    // replay source (optional)
//     "runner": "native" | ["python3", "-m", "runner"],
//     "designer": {"seed": 0, "reductions": [...], "refinements": {...},
//                  "malformed_every": 0}     // mock backend only
//   }
//
// Unknown keys are rejected at every level.
namespace redahd::cli {

struct RunConfig {
  evolution::EvolutionConfig evolution;
  llm::LlmConfig llm;
  std::filesystem::path dataset;
  std::filesystem::path output_dir = "redahd-run";
  std::optional<std::filesystem::path> transcript;
  std::vector<std::string> runner{"native"};
  std::uint64_t designer_seed = 0;
  fixtures::DesignerOptions designer;
};

// Throws ParseError / ContractError (also for M_init < M and friends).
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig read_run_config(const std::filesystem::path& path);

}  // namespace redahd::cli
