#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "redahd/cop/types.hpp"
#include "redahd/sandbox/protocol.hpp"

namespace redahd::evolution {

enum class EvalStatus { Pending, Ok, InvalidSolution, RuntimeError, Timeout };
enum class Origin { Init, E2, M1 };

std::string_view to_string(EvalStatus s);
std::string_view to_string(Origin o);
EvalStatus parse_eval_status(std::string_view s);
Origin parse_origin(std::string_view s);

struct Heuristic {
  std::string id;
  std::string lr_id;
  std::string description;
  std::string code;
  std::optional<double> fitness;  // set iff status == Ok
  EvalStatus status = EvalStatus::Pending;
  std::string failure;            // cause when status is a failure
  int generation = 0;
  Origin origin = Origin::Init;
  std::vector<std::string> parents;
  std::size_t seq = 0;            // creation order, used for stable ties

  bool ok() const { return status == EvalStatus::Ok; }
};

nlohmann::json to_json(const Heuristic& h);
Heuristic heuristic_from_json(const nlohmann::json& j);

struct FitnessResult {
  EvalStatus status = EvalStatus::Pending;
  std::optional<double> fitness;
  std::vector<double> objectives;  // per instance, only when Ok
  std::string failure;
};

// Q = mean over the dataset of q(x, g(h(f(x)))). Every instance must yield a
// solution that passes cop::validate within the batch budget:
//   per-instance guest error or crashed runner -> RuntimeError
//   batch over budget                          -> Timeout
//   unparseable or infeasible solution         -> InvalidSolution
FitnessResult evaluate_fitness(const std::string& heuristic_code,
                               const std::string& reduction_code,
                               const cop::Dataset& dataset, sandbox::Sandbox& sandbox,
                               double timeout_seconds, const std::string& request_id);

void apply(Heuristic& h, const FitnessResult& r);

}  // namespace redahd::evolution
