#include "redahd/evolution/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "redahd/cop/objective.hpp"
#include "redahd/cop/serialize.hpp"
#include "redahd/llm/parse.hpp"
#include "redahd/llm/retry.hpp"
#include "redahd/prompts.hpp"
#include "redahd/util/digest.hpp"
#include "redahd/util/parallel.hpp"
#include "redahd/evolution/operators.hpp"

namespace redahd::evolution {

using nlohmann::json;
using reduction::LanguageReduction;

// ---------------------------------------------------------------------------
// config

EvolutionConfig default_config(cop::CopKind kind) {
  EvolutionConfig c;
  c.kind = kind;
  c.population_size = (kind == cop::CopKind::Tsp || kind == cop::CopKind::Kp) ? 10 : 20;
  return c;
}

void validate(const EvolutionConfig& c) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ContractError(std::string("invalid evolution config: ") + what);
  };
  need(c.active_lrs >= 1, "M must be >= 1");
  need(c.m_init >= c.active_lrs, "M_init must be >= M");
  need(c.population_size >= 1, "N must be >= 1");
  need(c.top_l >= 1, "l must be >= 1");
  need(c.stagnation_threshold >= 1, "T must be >= 1");
  need(c.generations >= 0, "G must be >= 0");
  need(c.timeout_seconds > 0.0, "timeout_seconds must be > 0");
  need(c.workers >= 1, "workers must be >= 1");
  need(c.retries >= 0, "retries must be >= 0");
}

json to_json(const EvolutionConfig& c) {
  return {{"kind", cop::to_string(c.kind)},
          {"population_size", c.population_size},
          {"active_lrs", c.active_lrs},
          {"m_init", c.m_init},
          {"top_l", c.top_l},
          {"stagnation_threshold", c.stagnation_threshold},
          {"generations", c.generations},
          {"timeout_seconds", c.timeout_seconds},
          {"seed", c.seed},
          {"workers", c.workers},
          {"retries", c.retries}};
}

EvolutionConfig evolution_config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("evolution config must be an object");
  try {
    auto c = default_config(cop::parse_kind(j.at("kind").get<std::string>()));
    for (const auto& [key, v] : j.items()) {
      if (key == "kind") continue;
      else if (key == "population_size") c.population_size = v.get<int>();
      else if (key == "active_lrs") c.active_lrs = v.get<int>();
      else if (key == "m_init") c.m_init = v.get<int>();
      else if (key == "top_l") c.top_l = v.get<int>();
      else if (key == "stagnation_threshold") c.stagnation_threshold = v.get<int>();
      else if (key == "generations") c.generations = v.get<int>();
      else if (key == "timeout_seconds") c.timeout_seconds = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "workers") c.workers = v.get<std::size_t>();
      else if (key == "retries") c.retries = v.get<int>();
      else throw ParseError("unknown evolution config key '" + key + "'");
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("evolution config: ") + e.what());
  } catch (const ContractError& e) {
    throw ParseError(std::string("evolution config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// serialization helpers

namespace {

json opt(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::optional<double> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json record_json(const reduction::RefinementRecord& r, bool with_timestamp) {
  json e{{"generation", r.generation},
         {"committed", r.committed},
         {"outcome", r.outcome},
         {"score_before", opt(r.score_before)},
         {"score_after", opt(r.score_after)}};
  if (with_timestamp) e["timestamp"] = r.timestamp;
  return e;
}

reduction::RefinementRecord record_from(const json& e) {
  reduction::RefinementRecord r;
  r.generation = e.at("generation").get<int>();
  r.committed = e.at("committed").get<bool>();
  r.outcome = e.at("outcome").get<std::string>();
  r.score_before = opt_from(e.at("score_before"));
  r.score_after = opt_from(e.at("score_after"));
  r.timestamp = e.value("timestamp", "");
  return r;
}

json generation_json(const GenerationRecord& g, bool with_timestamps) {
  json fp = json::array();
  for (const auto& [lr, q] : g.fingerprint) fp.push_back({lr, q});
  json scores = json::array();
  for (const auto& [lr, s] : g.lr_scores) scores.push_back({{"lr_id", lr}, {"score", opt(s)}});
  json refs = json::array();
  for (const auto& ev : g.refinements) {
    auto e = record_json(ev.record, with_timestamps);
    e["lr_id"] = ev.lr_id;
    refs.push_back(std::move(e));
  }
  return {{"generation", g.generation},
          {"best_q", opt(g.best_q)},
          {"best_so_far", opt(g.best_so_far)},
          {"population", std::move(fp)},
          {"lr_scores", std::move(scores)},
          {"refinements", std::move(refs)},
          {"offspring_attempted", g.offspring_attempted},
          {"offspring_ok", g.offspring_ok}};
}

GenerationRecord generation_from(const json& j) {
  GenerationRecord g;
  g.generation = j.at("generation").get<int>();
  g.best_q = opt_from(j.at("best_q"));
  g.best_so_far = opt_from(j.at("best_so_far"));
  for (const auto& p : j.at("population"))
    g.fingerprint.emplace_back(p.at(0).get<std::string>(), p.at(1).get<double>());
  for (const auto& s : j.at("lr_scores"))
    g.lr_scores.emplace_back(s.at("lr_id").get<std::string>(), opt_from(s.at("score")));
  for (const auto& r : j.at("refinements"))
    g.refinements.push_back({r.at("lr_id").get<std::string>(), record_from(r)});
  g.offspring_attempted = j.at("offspring_attempted").get<int>();
  g.offspring_ok = j.at("offspring_ok").get<int>();
  return g;
}

json candidate_json(const CandidateReport& c) {
  return {{"index", c.index},       {"lr_id", c.lr_id}, {"description", c.description},
          {"valid", c.valid},       {"score", opt(c.score)}, {"cause", c.cause}};
}

CandidateReport candidate_from(const json& j) {
  CandidateReport c;
  c.index = j.at("index").get<std::size_t>();
  c.lr_id = j.at("lr_id").get<std::string>();
  c.description = j.at("description").get<std::string>();
  c.valid = j.at("valid").get<bool>();
  c.score = opt_from(j.at("score"));
  c.cause = j.at("cause").get<std::string>();
  return c;
}

json heuristics_json(const std::vector<Heuristic>& hs) {
  json a = json::array();
  for (const auto& h : hs) a.push_back(to_json(h));
  return a;
}

}  // namespace

json to_json(const Bundle& b) {
  return {{"kind", cop::to_string(b.kind)},
          {"heuristic", to_json(b.heuristic)},
          {"problem_b_description", b.problem_b_description},
          {"reduction_code", b.reduction_code},
          {"code_template", b.code_template}};
}

Bundle bundle_from_json(const json& j) {
  try {
    Bundle b;
    b.kind = cop::parse_kind(j.at("kind").get<std::string>());
    b.heuristic = heuristic_from_json(j.at("heuristic"));
    b.problem_b_description = j.at("problem_b_description").get<std::string>();
    b.reduction_code = j.at("reduction_code").get<std::string>();
    b.code_template = j.at("code_template").get<std::string>();
    return b;
  } catch (const json::exception& e) {
    throw ParseError(std::string("heuristic bundle: ") + e.what());
  } catch (const ContractError& e) {
    throw ParseError(std::string("heuristic bundle: ") + e.what());
  }
}

json to_json(const RunResult& r) {
  const auto& s = r.state;
  auto config = to_json(s.config);
  config.erase("workers");  // does not affect results
  json candidates = json::array();
  for (const auto& c : s.candidates) candidates.push_back(candidate_json(c));
  json lrs = json::array();
  for (const auto& lr : s.lrs) lrs.push_back(reduction::to_json(lr, /*with_timestamps=*/false));
  json gens = json::array();
  for (const auto& g : s.trace) gens.push_back(generation_json(g, false));
  return {{"config", std::move(config)},
          {"dataset",
           {{"kind", cop::to_string(s.config.kind)}, {"digest", r.dataset_digest}}},
          {"initialization", {{"candidates", std::move(candidates)}, {"warnings", s.warnings}}},
          {"language_reductions", std::move(lrs)},
          {"active_lrs", s.active},
          {"generations", std::move(gens)},
          {"final_population", heuristics_json(s.population)},
          {"best", s.best ? to_json(*s.best) : json(nullptr)},
          {"llm_calls", s.llm_calls},
          {"transcript_id", r.transcript_id ? json(*r.transcript_id) : json(nullptr)}};
}

// ---------------------------------------------------------------------------
// engine

class Engine::CountingClient : public llm::Client {
 public:
  CountingClient(std::shared_ptr<llm::Client> inner, std::size_t start)
      : Client(inner->params()), inner_(std::move(inner)), count_(start) {}
  std::size_t count() const { return count_.load(); }
  const std::shared_ptr<llm::Client>& inner() const { return inner_; }

 protected:
  llm::ChatExchange do_exchange(const std::string& prompt) override {
    ++count_;
    return inner_->exchange(prompt);
  }

 private:
  std::shared_ptr<llm::Client> inner_;
  std::atomic<std::size_t> count_;
};

namespace {

std::string dataset_digest(const cop::Dataset& d) {
  return util::sha256_hex(cop::dataset_to_jsonl(d));
}

std::string init_prompt(const LanguageReduction& lr) {
  return prompts::substitute(prompts::kInitialization,
                             {{"PROBLEM_DESCRIPTION", lr.problem_b_description},
                              {"CODE_TEMPLATE", lr.code_template}});
}

std::string e2_prompt(const LanguageReduction& lr, const Heuristic& a, const Heuristic& b) {
  return prompts::substitute(prompts::kCrossoverE2,
                             {{"PROBLEM_DESCRIPTION", lr.problem_b_description},
                              {"ALGORITHM_1", a.description},
                              {"CODE_1", a.code},
                              {"ALGORITHM_2", b.description},
                              {"CODE_2", b.code},
                              {"CODE_TEMPLATE", lr.code_template}});
}

std::string m1_prompt(const LanguageReduction& lr, const Heuristic& a) {
  return prompts::substitute(prompts::kMutationM1,
                             {{"PROBLEM_DESCRIPTION", lr.problem_b_description},
                              {"ALGORITHM", a.description},
                              {"CODE", a.code},
                              {"CODE_TEMPLATE", lr.code_template}});
}

}  // namespace

Engine::Engine(EvolutionConfig config, std::shared_ptr<llm::Client> llm,
               std::shared_ptr<sandbox::Sandbox> sandbox, cop::Dataset dataset)
    : llm_(std::make_shared<CountingClient>(std::move(llm), 0)),
      sandbox_(std::move(sandbox)),
      dataset_(std::move(dataset)) {
  validate(config);
  cop::check_dataset(dataset_);
  if (dataset_.kind != config.kind)
    throw ContractError("dataset kind " + std::string(cop::to_string(dataset_.kind)) +
                        " does not match configured kind " +
                        std::string(cop::to_string(config.kind)));
  dataset_digest_ = dataset_digest(dataset_);
  state_.config = config;
  state_.rng = util::Rng(config.seed);
}

LanguageReduction& Engine::lr(const std::string& id) {
  for (auto& l : state_.lrs)
    if (l.id == id) return l;
  throw ContractError("unknown language reduction " + id);
}

std::vector<std::optional<double>> Engine::active_scores() const {
  std::vector<std::optional<double>> out;
  for (const auto& id : state_.active)
    for (const auto& l : state_.lrs)
      if (l.id == id) out.push_back(l.score);
  return out;
}

std::optional<Heuristic> Engine::synthesize_heuristic(const std::string& prompt,
                                                      const std::string& lr_id, Origin origin,
                                                      std::vector<std::string> parents) {
  std::pair<std::string, std::string> parsed;
  try {
    parsed = llm::ask_with_retries(*llm_, prompt, state_.config.retries, [](const std::string& r) {
      return std::make_pair(llm::extract_braced_description(r), llm::extract_code(r, {"solve_B"}));
    });
  } catch (const ExtractionError&) {
    return std::nullopt;  // the slot is spent
  }
  Heuristic h;
  h.seq = state_.next_seq++;
  h.id = "H-" + std::to_string(h.seq);
  h.lr_id = lr_id;
  h.description = std::move(parsed.first);
  h.code = std::move(parsed.second);
  h.origin = origin;
  h.generation = origin == Origin::Init ? 0 : state_.generation + 1;
  h.parents = std::move(parents);
  return h;
}

void Engine::evaluate(std::vector<Heuristic>& hs, const std::string& reduction_code) {
  util::parallel_for(hs.size(), state_.config.workers, [&](std::size_t i) {
    auto& h = hs[i];
    const auto& code = reduction_code.empty() ? lr(h.lr_id).reduction_code : reduction_code;
    apply(h, evaluate_fitness(h.code, code, dataset_, *sandbox_, state_.config.timeout_seconds, h.id));
  });
}

void Engine::observe(const Heuristic& h) {
  if (!h.ok() || !h.fitness) return;
  if (state_.best && !(*h.fitness > *state_.best->heuristic.fitness)) return;
  const auto& l = lr(h.lr_id);
  state_.best = Bundle{state_.config.kind, h, l.problem_b_description, l.reduction_code,
                       l.code_template};
}

void Engine::record_generation(std::vector<RefinementEvent> refinements, int attempted, int ok) {
  GenerationRecord g;
  g.generation = state_.generation;
  for (const auto& h : state_.population) {
    if (!g.best_q || *h.fitness > *g.best_q) g.best_q = h.fitness;
    g.fingerprint.emplace_back(h.lr_id, *h.fitness);
  }
  std::sort(g.fingerprint.begin(), g.fingerprint.end());
  if (state_.best) g.best_so_far = state_.best->heuristic.fitness;
  for (const auto& id : state_.active) g.lr_scores.emplace_back(id, lr(id).score);
  g.refinements = std::move(refinements);
  g.offspring_attempted = attempted;
  g.offspring_ok = ok;
  state_.trace.push_back(std::move(g));
  state_.llm_calls = llm_->count();
}

void Engine::initialize() {
  if (state_.initialized) throw ContractError("engine already initialized");
  const auto& cfg = state_.config;
  const std::string desc_a(prompts::problem_description(cfg.kind));
  const auto tmpl = prompts::reduction_template(cfg.kind);

  std::vector<std::string> descriptions;
  try {
    descriptions = reduction::propose_candidate_problems(desc_a, cfg.m_init, *llm_, cfg.retries);
  } catch (const ExtractionError& e) {
    throw InitializationError(std::string("no candidate problems: ") + e.what());
  }

  const int per_lr = (cfg.population_size + cfg.active_lrs - 1) / cfg.active_lrs;
  const reduction::EvalSettings eval{cfg.timeout_seconds, cfg.workers};
  std::vector<std::vector<Heuristic>> probes(descriptions.size());
  int attempted = 0;
  int passed = 0;

  for (std::size_t i = 0; i < descriptions.size(); ++i) {
    LanguageReduction l;
    l.id = "LR-" + std::to_string(i + 1);
    l.candidate_index = i;
    l.problem_b_description = descriptions[i];
    state_.lrs.push_back(l);
    CandidateReport report{i, l.id, descriptions[i], false, std::nullopt, ""};

    std::string feedback;
    for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
      auto& cand = lr(l.id);
      try {
        cand.reduction_code =
            reduction::synthesize_reduction(desc_a, cand.problem_b_description, tmpl, *llm_,
                                            cfg.retries, feedback);
        cand.code_template = reduction::synthesize_code_template(cand.reduction_code, *llm_, cfg.retries);
      } catch (const ExtractionError& e) {
        report.cause = e.what();
        break;
      }
      probes[i].clear();
      for (int k = 0; k < per_lr; ++k)
        if (auto h = synthesize_heuristic(init_prompt(cand), cand.id, Origin::Init, {}))
          probes[i].push_back(std::move(*h));
      attempted += static_cast<int>(probes[i].size());
      if (probes[i].empty()) {
        report.cause = "no usable probe heuristics";
        feedback = report.cause;
        continue;
      }
      const auto outcome = reduction::vet_reduction(cand, probes[i], dataset_, *sandbox_, eval);
      if (outcome.valid) {
        report.valid = true;
        report.cause.clear();
        break;
      }
      report.cause = outcome.cause;
      feedback = "every heuristic run through these functions failed; first failure: " + outcome.cause;
    }

    auto& cand = lr(l.id);
    if (report.valid) {
      cand.score = reduction::compute_lr_score(cand.id, probes[i], cfg.top_l);
      for (const auto& h : probes[i]) passed += h.ok() ? 1 : 0;
    } else {
      cand.score = -std::numeric_limits<double>::infinity();
      cand.failure = report.cause;
    }
    report.score = cand.score;
    state_.candidates.push_back(report);
  }

  const auto sel = reduction::select_initial_lrs(state_.lrs, cfg.active_lrs);
  state_.warnings = sel.warnings;
  if (sel.chosen.empty()) {
    std::string why = "no valid language reduction among " + std::to_string(descriptions.size()) +
                      " candidates";
    for (const auto& c : state_.candidates) why += "\n  " + c.lr_id + ": " + c.cause;
    throw InitializationError(why);
  }
  for (auto i : sel.chosen) state_.active.push_back(state_.lrs[i].id);

  for (auto i : sel.chosen)
    for (const auto& h : probes[i])
      if (h.ok()) state_.population.push_back(h);
  std::sort(state_.population.begin(), state_.population.end(),
            [](const Heuristic& a, const Heuristic& b) { return a.seq < b.seq; });
  for (const auto& h : state_.population) observe(h);

  state_.initialized = true;
  state_.generation = 0;
  record_generation({}, attempted, passed);
  if (on_generation) on_generation(*this);
}

void Engine::step() {
  if (!state_.initialized) throw ContractError("engine not initialized");
  const auto& cfg = state_.config;
  const auto sense = cop::sense_of(cfg.kind);
  const auto parents_pool = state_.population;

  struct Job {
    Origin op;
    std::string lr_id;
    std::vector<std::size_t> parents;
  };
  std::vector<Job> jobs;
  for (auto op : {Origin::E2, Origin::M1}) {
    const auto plan = allocate_ration(active_scores(), cfg.population_size, sense, state_.rng);
    for (std::size_t j = 0; j < plan.size(); ++j)
      for (int s = 0; s < plan[j]; ++s)
        jobs.push_back({op, state_.active[j],
                        select_parents(parents_pool, op == Origin::E2 ? 2 : 1, state_.rng)});
  }

  std::vector<Heuristic> offspring;
  for (const auto& job : jobs) {
    const auto& target = lr(job.lr_id);
    const auto& p = parents_pool;
    const auto prompt = job.op == Origin::E2
                            ? e2_prompt(target, p[job.parents[0]], p[job.parents[1]])
                            : m1_prompt(target, p[job.parents[0]]);
    std::vector<std::string> ids;
    for (auto k : job.parents) ids.push_back(p[k].id);
    if (auto h = synthesize_heuristic(prompt, job.lr_id, job.op, std::move(ids)))
      offspring.push_back(std::move(*h));
  }
  evaluate(offspring, "");
  int ok = 0;
  for (const auto& h : offspring) {
    ok += h.ok() ? 1 : 0;
    observe(h);
  }

  auto pool = parents_pool;
  pool.insert(pool.end(), offspring.begin(), offspring.end());
  state_.population = manage_population(
      std::move(pool), {static_cast<std::size_t>(cfg.population_size), state_.generation,
                        cfg.stagnation_threshold, cfg.top_l, state_.active});

  for (const auto& id : state_.active) {
    auto& l = lr(id);
    const auto fresh = reduction::compute_lr_score(id, state_.population, cfg.top_l);
    const bool improved = fresh && (!l.score || *fresh > *l.score);
    if (improved) {
      l.stagnation_counter = 0;
      l.refinement_attempted = false;
    } else {
      ++l.stagnation_counter;
      if (fresh != l.score) l.refinement_attempted = false;
    }
    l.score = fresh;
  }

  std::vector<RefinementEvent> events;
  const std::string desc_a(prompts::problem_description(cfg.kind));
  for (const auto& id : state_.active) {
    auto& l = lr(id);
    if (l.stagnation_counter < cfg.stagnation_threshold || l.refinement_attempted) continue;
    if (!l.score) continue;  // no heuristics left to re-evaluate
    const reduction::RefinementSettings rs{cfg.top_l, cfg.stagnation_threshold, cfg.retries,
                                           state_.generation + 1,
                                           {cfg.timeout_seconds, cfg.workers}};
    auto rec = reduction::refine_reduction(l, desc_a, *llm_, state_.population, dataset_,
                                           *sandbox_, rs);
    if (rec.committed)
      for (const auto& h : state_.population)
        if (h.lr_id == id) observe(h);
    events.push_back({id, std::move(rec)});
  }

  ++state_.generation;
  record_generation(std::move(events), static_cast<int>(jobs.size()), ok);
  if (on_generation) on_generation(*this);
}

RunResult Engine::run() {
  if (!state_.initialized) initialize();
  while (state_.generation < state_.config.generations) step();
  return result();
}

RunResult Engine::result() const {
  RunResult r{state_, dataset_digest_, std::nullopt};
  r.state.llm_calls = llm_->count();
  return r;
}

// ---------------------------------------------------------------------------
// checkpoints

namespace {
constexpr int kSchemaVersion = 1;
}

json Engine::checkpoint() const {
  const auto& s = state_;
  json lrs = json::array();
  for (const auto& l : s.lrs) lrs.push_back(reduction::to_json(l, true));
  json gens = json::array();
  for (const auto& g : s.trace) gens.push_back(generation_json(g, true));
  json cands = json::array();
  for (const auto& c : s.candidates) cands.push_back(candidate_json(c));
  return {{"schema_version", kSchemaVersion},
          {"config", to_json(s.config)},
          {"dataset_digest", dataset_digest_},
          {"initialized", s.initialized},
          {"generation", s.generation},
          {"language_reductions", std::move(lrs)},
          {"active_lrs", s.active},
          {"population", heuristics_json(s.population)},
          {"best", s.best ? to_json(*s.best) : json(nullptr)},
          {"generations", std::move(gens)},
          {"candidates", std::move(cands)},
          {"warnings", s.warnings},
          {"rng", s.rng.serialize()},
          {"next_seq", s.next_seq},
          {"llm_calls", llm_->count()}};
}

std::size_t Engine::checkpoint_llm_calls(const json& cp) {
  try {
    return cp.at("llm_calls").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
}

Engine Engine::resume(const json& cp, std::shared_ptr<llm::Client> llm,
                      std::shared_ptr<sandbox::Sandbox> sandbox, cop::Dataset dataset) {
  try {
    if (cp.at("schema_version").get<int>() != kSchemaVersion)
      throw ParseError("checkpoint schema version " + cp.at("schema_version").dump() +
                       " is not supported");
    Engine e(evolution_config_from_json(cp.at("config")), std::move(llm), std::move(sandbox),
             std::move(dataset));
    if (cp.at("dataset_digest").get<std::string>() != e.dataset_digest_)
      throw ContractError("checkpoint was taken on a different dataset");
    auto& s = e.state_;
    s.initialized = cp.at("initialized").get<bool>();
    s.generation = cp.at("generation").get<int>();
    for (const auto& l : cp.at("language_reductions")) s.lrs.push_back(reduction::lr_from_json(l));
    s.active = cp.at("active_lrs").get<std::vector<std::string>>();
    for (const auto& h : cp.at("population")) s.population.push_back(heuristic_from_json(h));
    if (!cp.at("best").is_null()) s.best = bundle_from_json(cp.at("best"));
    for (const auto& g : cp.at("generations")) s.trace.push_back(generation_from(g));
    for (const auto& c : cp.at("candidates")) s.candidates.push_back(candidate_from(c));
    s.warnings = cp.at("warnings").get<std::vector<std::string>>();
    s.rng.deserialize(cp.at("rng").get<std::string>());
    s.next_seq = cp.at("next_seq").get<std::size_t>();
    s.llm_calls = cp.at("llm_calls").get<std::size_t>();
    e.llm_ = std::make_shared<CountingClient>(e.llm_->inner(), s.llm_calls);
    return e;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("checkpoint: ") + ex.what());
  }
}

}  // namespace redahd::evolution
