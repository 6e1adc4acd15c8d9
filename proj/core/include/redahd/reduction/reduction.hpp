#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "redahd/cop/types.hpp"
#include "redahd/evolution/heuristic.hpp"
#include "redahd/llm/client.hpp"
#include "redahd/sandbox/protocol.hpp"

namespace redahd::reduction {

enum class LrStatus { Candidate, Active, Retired };
std::string_view to_string(LrStatus s);
LrStatus parse_lr_status(std::string_view s);

struct RefinementRecord {
  int generation = 0;
  bool committed = false;
  std::string outcome;  // "committed", "rejected: not improved", "rejected: invalid", ...
  std::optional<double> score_before;
  std::optional<double> score_after;
  std::string timestamp;  // UTC; left out of run results
};

struct LanguageReduction {
  std::string id;
  std::size_t candidate_index = 0;
  std::string problem_b_description;
  std::string reduction_code;
  std::string code_template;
  // Unset until heuristics are evaluated; -inf when every one of them failed.
  std::optional<double> score;
  int stagnation_counter = 0;
  // A refinement was tried (and rolled back) in the current stagnation
  // episode; cleared whenever the score changes.
  bool refinement_attempted = false;
  LrStatus status = LrStatus::Candidate;
  std::string failure;  // why a candidate ended up invalid
  std::vector<RefinementRecord> history;
};

nlohmann::json to_json(const LanguageReduction& lr, bool with_timestamps = true);
LanguageReduction lr_from_json(const nlohmann::json& j);

inline const std::vector<std::string>& reduction_entry_points() {
  static const std::vector<std::string> names{"convert_input_A_to_B", "convert_solution_B_to_A"};
  return names;
}

// --- synthesis (LLM) -------------------------------------------------------
// Each call retries up to `retries` times on unusable answers, feeding the
// failure back; ExtractionError once exhausted. LlmError propagates.

std::vector<std::string> propose_candidate_problems(std::string_view desc_a, int m_init,
                                                    llm::Client& llm, int retries = 3);

std::string synthesize_reduction(std::string_view desc_a, std::string_view desc_b,
                                 std::string_view reduction_template, llm::Client& llm,
                                 int retries = 3, std::string_view feedback = {});

std::string synthesize_code_template(std::string_view reduction_code, llm::Client& llm,
                                     int retries = 3);

// --- scoring and selection -------------------------------------------------

// Mean of the best min(l, k) fitness values among the k ok heuristics tagged
// with lr_id; unset when there are none.
std::optional<double> compute_lr_score(std::string_view lr_id,
                                       const std::vector<evolution::Heuristic>& population,
                                       int l);

struct Selection {
  std::vector<std::size_t> chosen;  // indices into the candidates, best first
  std::vector<std::string> warnings;
};

// The M best finite-scored candidates become active (ties: earlier candidate),
// every other candidate is retired.
Selection select_initial_lrs(std::vector<LanguageReduction>& candidates, int m);

// --- vetting and refinement ------------------------------------------------

struct EvalSettings {
  double timeout_seconds = 60.0;
  std::size_t workers = 1;
};

struct ValidationOutcome {
  bool valid = false;
  std::string cause;  // first failure when invalid
};

// Evaluates every probe (results are written into them) and judges the LR
// valid iff at least one probe is ok on the whole dataset.
ValidationOutcome vet_reduction(const LanguageReduction& lr,
                                std::vector<evolution::Heuristic>& probes,
                                const cop::Dataset& dataset, sandbox::Sandbox& sandbox,
                                const EvalSettings& eval);

struct RefinementSettings {
  int l = 3;
  int stagnation_threshold = 3;
  int retries = 3;
  int generation = 0;
  EvalSettings eval;
};

// Asks for an improved (f, g), regenerates the template and re-evaluates the
// LR's heuristics. Commits only when the score strictly improves; otherwise
// lr and population are left exactly as they were apart from the history
// entry and the attempted flag. ContractError when the counter is below T.
RefinementRecord refine_reduction(LanguageReduction& lr, std::string_view desc_a, llm::Client& llm,
                                  std::vector<evolution::Heuristic>& population,
                                  const cop::Dataset& dataset, sandbox::Sandbox& sandbox,
                                  const RefinementSettings& settings);

}  // namespace redahd::reduction
