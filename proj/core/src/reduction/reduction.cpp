#include "redahd/reduction/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numeric>

#include "redahd/error.hpp"
#include "redahd/llm/parse.hpp"
#include "redahd/llm/retry.hpp"
#include "redahd/prompts.hpp"
#include "redahd/util/parallel.hpp"

namespace redahd::reduction {

std::string_view to_string(LrStatus s) {
  switch (s) {
    case LrStatus::Candidate: return "candidate";
    case LrStatus::Active: return "active";
    case LrStatus::Retired: return "retired";
  }
  return "candidate";
}

LrStatus parse_lr_status(std::string_view s) {
  for (auto v : {LrStatus::Candidate, LrStatus::Active, LrStatus::Retired})
    if (to_string(v) == s) return v;
  throw ParseError("unknown LR status '" + std::string(s) + "'");
}

namespace {

nlohmann::json score_json(const std::optional<double>& s) {
  if (!s || !std::isfinite(*s)) return nullptr;
  return *s;
}

// -inf is written as null too, so keep a flag to tell it from "unset".
std::optional<double> score_from(const nlohmann::json& j, const char* key, bool failed) {
  if (!j.at(key).is_null()) return j.at(key).get<double>();
  if (failed) return -std::numeric_limits<double>::infinity();
  return std::nullopt;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::json to_json(const LanguageReduction& lr, bool with_timestamps) {
  auto history = nlohmann::json::array();
  for (const auto& r : lr.history) {
    nlohmann::json e{{"generation", r.generation},
                     {"committed", r.committed},
                     {"outcome", r.outcome},
                     {"score_before", score_json(r.score_before)},
                     {"score_after", score_json(r.score_after)}};
    if (with_timestamps) e["timestamp"] = r.timestamp;
    history.push_back(std::move(e));
  }
  const bool failed = lr.score && std::isinf(*lr.score);
  return {{"id", lr.id},
          {"candidate_index", lr.candidate_index},
          {"description", lr.problem_b_description},
          {"reduction_code", lr.reduction_code},
          {"code_template", lr.code_template},
          {"score", score_json(lr.score)},
          {"score_failed", failed},
          {"stagnation_counter", lr.stagnation_counter},
          {"refinement_attempted", lr.refinement_attempted},
          {"status", to_string(lr.status)},
          {"failure", lr.failure},
          {"history", std::move(history)}};
}

LanguageReduction lr_from_json(const nlohmann::json& j) {
  try {
    LanguageReduction lr;
    lr.id = j.at("id").get<std::string>();
    lr.candidate_index = j.at("candidate_index").get<std::size_t>();
    lr.problem_b_description = j.at("description").get<std::string>();
    lr.reduction_code = j.at("reduction_code").get<std::string>();
    lr.code_template = j.at("code_template").get<std::string>();
    lr.score = score_from(j, "score", j.at("score_failed").get<bool>());
    lr.stagnation_counter = j.at("stagnation_counter").get<int>();
    lr.refinement_attempted = j.at("refinement_attempted").get<bool>();
    lr.status = parse_lr_status(j.at("status").get<std::string>());
    lr.failure = j.at("failure").get<std::string>();
    for (const auto& e : j.at("history")) {
      RefinementRecord r;
      r.generation = e.at("generation").get<int>();
      r.committed = e.at("committed").get<bool>();
      r.outcome = e.at("outcome").get<std::string>();
      r.score_before = score_from(e, "score_before", false);
      r.score_after = score_from(e, "score_after", false);
      r.timestamp = e.value("timestamp", "");
      lr.history.push_back(std::move(r));
    }
    return lr;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("LR record: ") + e.what());
  }
}

std::vector<std::string> propose_candidate_problems(std::string_view desc_a, int m_init,
                                                    llm::Client& llm, int retries) {
  if (m_init < 1) throw ContractError("m_init must be >= 1");
  const auto prompt = prompts::substitute(
      prompts::kCandidateProblems,
      {{"PROBLEM_A", std::string(desc_a)}, {"M_INIT", std::to_string(m_init)}});
  return llm::ask_with_retries(llm, prompt, retries, [&](const std::string& response) {
    std::vector<std::string> out;
    for (auto& d : llm::extract_double_braced(response))
      if (!d.empty() && out.size() < static_cast<std::size_t>(m_init)) out.push_back(std::move(d));
    if (out.empty()) throw ExtractionError("no nonempty {{...}} problem descriptions found");
    return out;
  });
}

std::string synthesize_reduction(std::string_view desc_a, std::string_view desc_b,
                                 std::string_view reduction_template, llm::Client& llm,
                                 int retries, std::string_view feedback) {
  auto prompt = prompts::substitute(prompts::kReductionFunctions,
                                    {{"PROBLEM_A", std::string(desc_a)},
                                     {"PROBLEM_B", std::string(desc_b)},
                                     {"REDUCTION_TEMPLATE", std::string(reduction_template)}});
  if (!feedback.empty()) prompt = prompts::with_feedback(prompt, feedback);
  return llm::ask_with_retries(llm, prompt, retries, [](const std::string& response) {
    return llm::extract_code(response, reduction_entry_points());
  });
}

std::string synthesize_code_template(std::string_view reduction_code, llm::Client& llm,
                                     int retries) {
  if (reduction_code.empty()) throw ContractError("reduction code is empty");
  const auto prompt = prompts::substitute(
      prompts::kCodeTemplate, {{"REDUCTION_FUNCTIONS", std::string(reduction_code)},
                               {"HEURISTIC_TEMPLATE", std::string(prompts::heuristic_template())}});
  return llm::ask_with_retries(llm, prompt, retries, [](const std::string& response) {
    return llm::extract_code(response, {"solve_B"});
  });
}

std::optional<double> compute_lr_score(std::string_view lr_id,
                                       const std::vector<evolution::Heuristic>& population,
                                       int l) {
  if (l < 1) throw ContractError("l must be >= 1");
  std::vector<double> q;
  for (const auto& h : population)
    if (h.lr_id == lr_id && h.ok() && h.fitness) q.push_back(*h.fitness);
  if (q.empty()) return std::nullopt;
  const auto k = std::min<std::size_t>(q.size(), static_cast<std::size_t>(l));
  std::partial_sort(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(k), q.end(),
                    std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += q[i];
  return sum / static_cast<double>(k);
}

Selection select_initial_lrs(std::vector<LanguageReduction>& candidates, int m) {
  if (m < 1) throw ContractError("M must be >= 1");
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (candidates[i].score && std::isfinite(*candidates[i].score)) valid.push_back(i);
  std::stable_sort(valid.begin(), valid.end(), [&](std::size_t a, std::size_t b) {
    return *candidates[a].score > *candidates[b].score;
  });
  Selection sel;
  const auto take = std::min<std::size_t>(valid.size(), static_cast<std::size_t>(m));
  sel.chosen.assign(valid.begin(), valid.begin() + static_cast<std::ptrdiff_t>(take));
  if (take < static_cast<std::size_t>(m))
    sel.warnings.push_back("only " + std::to_string(take) + " valid language reduction(s) for M = " +
                           std::to_string(m));
  for (auto& c : candidates) c.status = LrStatus::Retired;
  for (auto i : sel.chosen) candidates[i].status = LrStatus::Active;
  return sel;
}

ValidationOutcome vet_reduction(const LanguageReduction& lr,
                                std::vector<evolution::Heuristic>& probes,
                                const cop::Dataset& dataset, sandbox::Sandbox& sandbox,
                                const EvalSettings& eval) {
  if (lr.reduction_code.empty() || lr.code_template.empty())
    throw ContractError("LR " + lr.id + " has no reduction code or template");
  util::parallel_for(probes.size(), eval.workers, [&](std::size_t i) {
    auto& h = probes[i];
    evolution::apply(h, evolution::evaluate_fitness(h.code, lr.reduction_code, dataset, sandbox,
                                                    eval.timeout_seconds, h.id));
  });
  ValidationOutcome out;
  for (const auto& h : probes) {
    if (h.ok()) {
      out.valid = true;
      out.cause.clear();
      return out;
    }
    if (out.cause.empty()) out.cause = h.failure;
  }
  if (probes.empty()) out.cause = "no probe heuristics";
  return out;
}

RefinementRecord refine_reduction(LanguageReduction& lr, std::string_view desc_a, llm::Client& llm,
                                  std::vector<evolution::Heuristic>& population,
                                  const cop::Dataset& dataset, sandbox::Sandbox& sandbox,
                                  const RefinementSettings& settings) {
  if (lr.stagnation_counter < settings.stagnation_threshold)
    throw ContractError("LR " + lr.id + " stagnation counter " +
                        std::to_string(lr.stagnation_counter) + " is below T = " +
                        std::to_string(settings.stagnation_threshold));

  RefinementRecord rec;
  rec.generation = settings.generation;
  rec.score_before = lr.score;
  rec.timestamp = utc_now();
  auto reject = [&](std::string why) {
    rec.outcome = "rejected: " + std::move(why);
    lr.refinement_attempted = true;
    lr.history.push_back(rec);
    return rec;
  };

  std::string code, tmpl;
  try {
    const auto prompt = prompts::substitute(
        prompts::kRefinement, {{"PROBLEM_A", std::string(desc_a)},
                               {"PROBLEM_B", lr.problem_b_description},
                               {"REDUCTION_FUNCTIONS", lr.reduction_code}});
    code = llm::ask_with_retries(llm, prompt, settings.retries, [](const std::string& r) {
      return llm::extract_code(r, reduction_entry_points());
    });
    tmpl = synthesize_code_template(code, llm, settings.retries);
  } catch (const ExtractionError& e) {
    return reject(std::string("llm failure: ") + e.what());
  }

  // Re-evaluate copies; the population is touched only on commit.
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < population.size(); ++i)
    if (population[i].lr_id == lr.id) members.push_back(i);
  std::vector<evolution::Heuristic> trial;
  for (auto i : members) trial.push_back(population[i]);
  util::parallel_for(trial.size(), settings.eval.workers, [&](std::size_t k) {
    auto& h = trial[k];
    evolution::apply(h, evolution::evaluate_fitness(h.code, code, dataset, sandbox,
                                                    settings.eval.timeout_seconds,
                                                    "refine-" + lr.id + "-" + h.id));
  });

  const auto after = compute_lr_score(lr.id, trial, settings.l);
  rec.score_after = after;
  if (!after) return reject("invalid");
  const double before = lr.score.value_or(-std::numeric_limits<double>::infinity());
  if (!(*after > before)) return reject("not improved");

  lr.reduction_code = std::move(code);
  lr.code_template = std::move(tmpl);
  lr.score = after;
  lr.stagnation_counter = 0;
  lr.refinement_attempted = false;
  for (std::size_t k = 0; k < members.size(); ++k) population[members[k]] = trial[k];
  std::erase_if(population, [&](const evolution::Heuristic& h) { return h.lr_id == lr.id && !h.ok(); });
  rec.committed = true;
  rec.outcome = "committed";
  lr.history.push_back(rec);
  return rec;
}

}  // namespace redahd::reduction
