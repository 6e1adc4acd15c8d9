#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "redahd/cop/types.hpp"
#include "redahd/error.hpp"
#include "redahd/evolution/heuristic.hpp"
#include "redahd/llm/client.hpp"
#include "redahd/reduction/reduction.hpp"
#include "redahd/sandbox/protocol.hpp"
#include "redahd/util/random.hpp"

namespace redahd::evolution {

struct EvolutionConfig {
  cop::CopKind kind = cop::CopKind::Tsp;
  int population_size = 10;  // N
  int active_lrs = 3;        // M
  int m_init = 10;
  int top_l = 3;
  int stagnation_threshold = 3;  // T, in generations
  int generations = 20;          // G
  double timeout_seconds = 60.0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;       // concurrent sandbox evaluations
  int retries = 3;               // per LLM synthesis call

  friend bool operator==(const EvolutionConfig&, const EvolutionConfig&) = default;
};

// N = 20 for CVRP/BPP/OBPP/MKP, 10 for TSP/KP; the rest as in the struct.
EvolutionConfig default_config(cop::CopKind kind);
// ContractError naming the first broken bound (M_init >= M >= 1, ...).
void validate(const EvolutionConfig& cfg);
nlohmann::json to_json(const EvolutionConfig& cfg);
// Missing keys take default_config(kind); unknown keys are a ParseError.
EvolutionConfig evolution_config_from_json(const nlohmann::json& j);

// Raised when no candidate LR survives vetting.
class InitializationError : public redahd::Error {
 public:
  using redahd::Error::Error;
};

struct CandidateReport {
  std::size_t index = 0;
  std::string lr_id;
  std::string description;
  bool valid = false;
  std::optional<double> score;
  std::string cause;
};

// h* with everything needed to run it on new root instances.
struct Bundle {
  cop::CopKind kind = cop::CopKind::Tsp;
  Heuristic heuristic;
  std::string problem_b_description;
  std::string reduction_code;
  std::string code_template;
};
nlohmann::json to_json(const Bundle& b);
Bundle bundle_from_json(const nlohmann::json& j);

struct RefinementEvent {
  std::string lr_id;
  reduction::RefinementRecord record;
};

struct GenerationRecord {
  int generation = 0;
  std::optional<double> best_q;        // best of the current population
  std::optional<double> best_so_far;   // h*
  std::vector<std::pair<std::string, double>> fingerprint;  // sorted (lr_id, Q)
  std::vector<std::pair<std::string, std::optional<double>>> lr_scores;
  std::vector<RefinementEvent> refinements;
  int offspring_attempted = 0;
  int offspring_ok = 0;
};

struct EngineState {
  EvolutionConfig config;
  bool initialized = false;
  int generation = 0;
  std::vector<reduction::LanguageReduction> lrs;  // every candidate, by index
  std::vector<std::string> active;                // active LR ids, selection order
  std::vector<Heuristic> population;
  std::optional<Bundle> best;
  std::vector<GenerationRecord> trace;
  std::vector<CandidateReport> candidates;
  std::vector<std::string> warnings;
  util::Rng rng;
  std::size_t next_seq = 0;
  std::size_t llm_calls = 0;
};

struct RunResult {
  EngineState state;
  std::string dataset_digest;
  std::optional<std::string> transcript_id;
};

// Deterministic serialization: no timestamps, no backend details, keys sorted.
nlohmann::json to_json(const RunResult& r);

class Engine {
 public:
  Engine(EvolutionConfig config, std::shared_ptr<llm::Client> llm,
         std::shared_ptr<sandbox::Sandbox> sandbox, cop::Dataset dataset);

  // Candidate generation, synthesis, vetting, selection and the initial
  // population. InitializationError when no LR is valid.
  void initialize();
  // One generation of E2 then M1 offspring, management, scoring, refinement.
  void step();
  // initialize() if needed, then step() until G generations are done.
  RunResult run();

  const EngineState& state() const { return state_; }
  RunResult result() const;

  // Called after initialization and after every generation.
  std::function<void(const Engine&)> on_generation;

  // Full state, enough to continue with resume().
  nlohmann::json checkpoint() const;
  // The client must continue the same call sequence: a replay client should
  // be seeked to the checkpoint's llm_calls first.
  static Engine resume(const nlohmann::json& checkpoint, std::shared_ptr<llm::Client> llm,
                       std::shared_ptr<sandbox::Sandbox> sandbox, cop::Dataset dataset);
  static std::size_t checkpoint_llm_calls(const nlohmann::json& checkpoint);

 private:
  class CountingClient;

  std::optional<Heuristic> synthesize_heuristic(const std::string& prompt, const std::string& lr_id,
                                                Origin origin, std::vector<std::string> parents);
  void evaluate(std::vector<Heuristic>& hs, const std::string& reduction_code);
  void observe(const Heuristic& h);
  void record_generation(std::vector<RefinementEvent> refinements, int attempted, int ok);
  reduction::LanguageReduction& lr(const std::string& id);
  std::vector<std::optional<double>> active_scores() const;

  std::shared_ptr<CountingClient> llm_;
  std::shared_ptr<sandbox::Sandbox> sandbox_;
  cop::Dataset dataset_;
  std::string dataset_digest_;
  EngineState state_;
};

}  // namespace redahd::evolution
