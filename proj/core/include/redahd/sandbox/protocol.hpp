#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "redahd/cop/types.hpp"

// Wire protocol between the engine and a code runner: newline-delimited JSON.
// The runner opens the stream with {"protocol_version": 1}, reads one request
// line and answers with one response line.
//
// Request:
//   {"request_id", "kind", "protocol": "offline" | "online_packing",
//    "reduction_code", "heuristic_code",
//    "entries": {"instance_map", "solution_map", "solve"},
//    "instances": [payload, ...],          // cop serialize format
//    "arguments": [[arg, ...], ...],       // offline only: positional args of f
//    "timeout_seconds"}
//
// offline:        b = instance_map(*arguments[k]); y = solution_map(solve(b))
// online_packing: for each arriving item, b = instance_map(item_size,
//                 bin_caps); scores = solution_map(solve(b))
//                 over the remaining capacities of every open bin; the runner
//                 places the item by cop::simulate_online_packing's rule and
//                 returns the per-item bin assignment.
// solve(b) is called as solve(*b) when b is a tuple and solve declares more
// than one parameter, and as solve(b) otherwise.
//
// Response:
//   {"request_id", "outcome": "completed" | "timeout" | "crashed",
//    "results": [{"solution": ...} | {"error": {"class", "message",
//    "traceback"}}, ...], "wall_time_seconds", "error"}
namespace redahd::sandbox {

inline constexpr int kProtocolVersion = 1;

enum class Protocol { Offline, OnlinePacking };

struct EntryNames {
  std::string instance_map = "convert_input_A_to_B";
  std::string solution_map = "convert_solution_B_to_A";
  std::string solve = "solve_B";
};

struct ExecRequest {
  std::string request_id;
  cop::CopKind kind = cop::CopKind::Tsp;
  std::string reduction_code;
  std::string heuristic_code;
  EntryNames entries;
  std::vector<cop::Instance> instances;
  double timeout_seconds = 60.0;  // for the whole batch
};

Protocol protocol_for(cop::CopKind kind);

// Positional arguments of convert_input_A_to_B, in reduction-template order:
//   tsp  (coord_matrix, distance_matrix)
//   cvrp (coord_matrix, distance_matrix, demands, capacity)
//   bpp  (items, bins)          bins = [W] * N
//   kp   (weights, values, capacity)
//   mkp  (values, weights, constraints)
// OBPP is called per item with (item_size, bin_caps) instead.
nlohmann::json call_arguments(const cop::Instance& instance);

enum class ErrorClass { Exception, BadShape, NonFinite };
enum class BatchOutcome { Completed, Timeout, Crashed };

std::string_view to_string(ErrorClass c);
std::string_view to_string(BatchOutcome o);

struct GuestError {
  ErrorClass error_class = ErrorClass::Exception;
  std::string message;
  std::string traceback;
};

// Exactly one of solution / error is set.
struct InstanceOutcome {
  std::optional<nlohmann::json> solution;
  std::optional<GuestError> error;
};

struct ExecResponse {
  std::string request_id;
  BatchOutcome outcome = BatchOutcome::Completed;
  std::vector<InstanceOutcome> results;
  double wall_time_seconds = 0.0;
  std::string error;  // batch-level cause for timeout / crashed
};

nlohmann::json to_json(const ExecRequest& request);
ExecRequest request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExecResponse& response);
// Throws ParseError on malformed input.
ExecResponse response_from_json(const nlohmann::json& j);

// Anything that can execute a request. Implementations must be safe to call
// from several threads at once.
class Sandbox {
 public:
  virtual ~Sandbox() = default;
  virtual ExecResponse execute(const ExecRequest& request) = 0;
};

}  // namespace redahd::sandbox
