#include "redahd/evolution/heuristic.hpp"

#include <algorithm>
#include <cmath>

#include "redahd/cop/objective.hpp"
#include "redahd/cop/serialize.hpp"
#include "redahd/cop/validate.hpp"
#include "redahd/error.hpp"

namespace redahd::evolution {

std::string_view to_string(EvalStatus s) {
  switch (s) {
    case EvalStatus::Pending: return "pending";
    case EvalStatus::Ok: return "ok";
    case EvalStatus::InvalidSolution: return "invalid_solution";
    case EvalStatus::RuntimeError: return "runtime_error";
    case EvalStatus::Timeout: return "timeout";
  }
  return "pending";
}

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::Init: return "init";
    case Origin::E2: return "e2";
    case Origin::M1: return "m1";
  }
  return "init";
}

EvalStatus parse_eval_status(std::string_view s) {
  for (auto v : {EvalStatus::Pending, EvalStatus::Ok, EvalStatus::InvalidSolution,
                 EvalStatus::RuntimeError, EvalStatus::Timeout})
    if (to_string(v) == s) return v;
  throw ParseError("unknown eval status '" + std::string(s) + "'");
}

Origin parse_origin(std::string_view s) {
  for (auto v : {Origin::Init, Origin::E2, Origin::M1})
    if (to_string(v) == s) return v;
  throw ParseError("unknown origin '" + std::string(s) + "'");
}

nlohmann::json to_json(const Heuristic& h) {
  nlohmann::json j{{"id", h.id},
                   {"lr_id", h.lr_id},
                   {"description", h.description},
                   {"code", h.code},
                   {"fitness", nullptr},
                   {"status", to_string(h.status)},
                   {"failure", h.failure},
                   {"generation", h.generation},
                   {"origin", to_string(h.origin)},
                   {"parents", h.parents},
                   {"seq", h.seq}};
  if (h.fitness && std::isfinite(*h.fitness)) j["fitness"] = *h.fitness;
  return j;
}

Heuristic heuristic_from_json(const nlohmann::json& j) {
  try {
    Heuristic h;
    h.id = j.at("id").get<std::string>();
    h.lr_id = j.at("lr_id").get<std::string>();
    h.description = j.at("description").get<std::string>();
    h.code = j.at("code").get<std::string>();
    if (!j.at("fitness").is_null()) h.fitness = j.at("fitness").get<double>();
    h.status = parse_eval_status(j.at("status").get<std::string>());
    h.failure = j.at("failure").get<std::string>();
    h.generation = j.at("generation").get<int>();
    h.origin = parse_origin(j.at("origin").get<std::string>());
    h.parents = j.at("parents").get<std::vector<std::string>>();
    h.seq = j.at("seq").get<std::size_t>();
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("heuristic record: ") + e.what());
  }
}

namespace {

FitnessResult fail(EvalStatus s, std::string why) {
  FitnessResult r;
  r.status = s;
  r.failure = std::move(why);
  return r;
}

}  // namespace

FitnessResult evaluate_fitness(const std::string& heuristic_code,
                               const std::string& reduction_code,
                               const cop::Dataset& dataset, sandbox::Sandbox& sandbox,
                               double timeout_seconds, const std::string& request_id) {
  cop::check_dataset(dataset);
  sandbox::ExecRequest req;
  req.request_id = request_id;
  req.kind = dataset.kind;
  req.reduction_code = reduction_code;
  req.heuristic_code = heuristic_code;
  req.instances = dataset.instances;
  req.timeout_seconds = timeout_seconds;
  const auto resp = sandbox.execute(req);

  switch (resp.outcome) {
    case sandbox::BatchOutcome::Timeout:
      return fail(EvalStatus::Timeout, "timeout: " + resp.error);
    case sandbox::BatchOutcome::Crashed:
      return fail(EvalStatus::RuntimeError, "crashed: " + resp.error);
    case sandbox::BatchOutcome::Completed:
      break;
  }
  if (resp.results.size() != dataset.instances.size())
    return fail(EvalStatus::RuntimeError, "runner returned " + std::to_string(resp.results.size()) +
                                              " results for " +
                                              std::to_string(dataset.instances.size()) + " instances");

  FitnessResult r;
  double sum = 0.0;
  for (std::size_t k = 0; k < resp.results.size(); ++k) {
    const auto& out = resp.results[k];
    const auto where = "instance " + std::to_string(k) + ": ";
    if (out.error)
      return fail(EvalStatus::RuntimeError, where + std::string(sandbox::to_string(out.error->error_class)) +
                                                ": " + out.error->message);
    if (!out.solution) return fail(EvalStatus::RuntimeError, where + "no solution");
    cop::Solution y;
    try {
      y = cop::solution_from_json(dataset.kind, *out.solution);
    } catch (const ParseError& e) {
      return fail(EvalStatus::InvalidSolution, where + e.what());
    }
    const auto report = cop::validate(dataset.instances[k], y);
    if (!report.valid()) {
      std::string what;
      for (std::size_t i = 0; i < std::min<std::size_t>(report.violations.size(), 3); ++i) {
        const auto& v = report.violations[i];
        what += (i ? "; " : "") + std::string(cop::to_string(v.code)) + ": " + v.detail;
      }
      return fail(EvalStatus::InvalidSolution, where + what);
    }
    const double q = cop::objective_unchecked(dataset.instances[k], y);
    r.objectives.push_back(q);
    sum += q;
  }
  r.status = EvalStatus::Ok;
  r.fitness = sum / static_cast<double>(r.objectives.size());
  return r;
}

void apply(Heuristic& h, const FitnessResult& r) {
  h.status = r.status;
  h.fitness = r.fitness;
  h.failure = r.failure;
}

}  // namespace redahd::evolution
