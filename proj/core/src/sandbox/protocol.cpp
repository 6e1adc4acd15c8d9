#include "redahd/sandbox/protocol.hpp"

#include "redahd/cop/serialize.hpp"
#include "redahd/error.hpp"

namespace redahd::sandbox {

using nlohmann::json;

Protocol protocol_for(cop::CopKind kind) {
  return kind == cop::CopKind::Obpp ? Protocol::OnlinePacking : Protocol::Offline;
}

json call_arguments(const cop::Instance& instance) {
  const json p = cop::instance_to_json(instance);
  switch (cop::kind_of(instance)) {
    case cop::CopKind::Tsp: return json::array({p["coords"], p["distances"]});
    case cop::CopKind::Cvrp:
      return json::array({p["coords"], p["distances"], p["demands"], p["capacity"]});
    case cop::CopKind::Bpp: {
      const auto& x = std::get<cop::BppInstance>(instance);
      return json::array({p["item_sizes"], std::vector<double>(x.item_sizes.size(), x.capacity)});
    }
    case cop::CopKind::Obpp:
      throw ContractError("call_arguments: OBPP is driven item by item");
    case cop::CopKind::Kp: return json::array({p["weights"], p["values"], p["capacity"]});
    case cop::CopKind::Mkp: return json::array({p["values"], p["weights"], p["constraints"]});
  }
  throw ContractError("call_arguments: unknown kind");
}

std::string_view to_string(ErrorClass c) {
  switch (c) {
    case ErrorClass::Exception: return "exception";
    case ErrorClass::BadShape: return "bad_shape";
    case ErrorClass::NonFinite: return "non_finite";
  }
  return "exception";
}

std::string_view to_string(BatchOutcome o) {
  switch (o) {
    case BatchOutcome::Completed: return "completed";
    case BatchOutcome::Timeout: return "timeout";
    case BatchOutcome::Crashed: return "crashed";
  }
  return "crashed";
}

namespace {

ErrorClass parse_error_class(const std::string& s) {
  for (auto c : {ErrorClass::Exception, ErrorClass::BadShape, ErrorClass::NonFinite}) {
    if (to_string(c) == s) return c;
  }
  throw ParseError("unknown error class '" + s + "'");
}

BatchOutcome parse_outcome(const std::string& s) {
  for (auto o : {BatchOutcome::Completed, BatchOutcome::Timeout, BatchOutcome::Crashed}) {
    if (to_string(o) == s) return o;
  }
  throw ParseError("unknown batch outcome '" + s + "'");
}

}  // namespace

json to_json(const ExecRequest& r) {
  if (!(r.timeout_seconds > 0.0)) throw ContractError("exec request: timeout must be > 0");
  json instances = json::array();
  json arguments = json::array();
  const bool offline = protocol_for(r.kind) == Protocol::Offline;
  for (const auto& x : r.instances) {
    if (cop::kind_of(x) != r.kind) throw ContractError("exec request: mixed instance kinds");
    instances.push_back(cop::instance_to_json(x));
    if (offline) arguments.push_back(call_arguments(x));
  }
  json j = {{"request_id", r.request_id},
            {"kind", cop::to_string(r.kind)},
            {"protocol", offline ? "offline" : "online_packing"},
            {"reduction_code", r.reduction_code},
            {"heuristic_code", r.heuristic_code},
            {"entries",
             {{"instance_map", r.entries.instance_map},
              {"solution_map", r.entries.solution_map},
              {"solve", r.entries.solve}}},
            {"instances", std::move(instances)},
            {"timeout_seconds", r.timeout_seconds}};
  if (offline) j["arguments"] = std::move(arguments);
  return j;
}

ExecRequest request_from_json(const json& j) {
  try {
    ExecRequest r;
    r.request_id = j.at("request_id").get<std::string>();
    r.kind = cop::parse_kind(j.at("kind").get<std::string>());
    r.reduction_code = j.at("reduction_code").get<std::string>();
    r.heuristic_code = j.at("heuristic_code").get<std::string>();
    const auto& e = j.at("entries");
    r.entries = {e.at("instance_map").get<std::string>(), e.at("solution_map").get<std::string>(),
                 e.at("solve").get<std::string>()};
    for (const auto& p : j.at("instances")) r.instances.push_back(cop::instance_from_json(r.kind, p));
    r.timeout_seconds = j.at("timeout_seconds").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("exec request: ") + e.what());
  }
}

json to_json(const ExecResponse& r) {
  json results = json::array();
  for (const auto& o : r.results) {
    if (o.solution) {
      results.push_back({{"solution", *o.solution}});
    } else if (o.error) {
      results.push_back({{"error",
                          {{"class", to_string(o.error->error_class)},
                           {"message", o.error->message},
                           {"traceback", o.error->traceback}}}});
    }
  }
  return {{"request_id", r.request_id},
          {"outcome", to_string(r.outcome)},
          {"results", std::move(results)},
          {"wall_time_seconds", r.wall_time_seconds},
          {"error", r.error}};
}

ExecResponse response_from_json(const json& j) {
  try {
    ExecResponse r;
    r.request_id = j.at("request_id").get<std::string>();
    r.outcome = parse_outcome(j.at("outcome").get<std::string>());
    r.wall_time_seconds = j.value("wall_time_seconds", 0.0);
    r.error = j.value("error", "");
    for (const auto& item : j.value("results", json::array())) {
      InstanceOutcome o;
      if (item.contains("solution")) {
        o.solution = item["solution"];
      } else if (item.contains("error")) {
        const auto& e = item["error"];
        o.error = GuestError{parse_error_class(e.value("class", "exception")),
                             e.value("message", ""), e.value("traceback", "")};
      } else {
        throw ParseError("exec response: result without solution or error");
      }
      r.results.push_back(std::move(o));
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("exec response: ") + e.what());
  }
}

}  // namespace redahd::sandbox
