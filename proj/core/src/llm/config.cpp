#include "redahd/llm/config.hpp"

#include <charconv>
#include <set>

#include "redahd/error.hpp"
#include "redahd/util/digest.hpp"

namespace redahd::llm {

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::Live: return "live";
    case Backend::Replay: return "replay";
    case Backend::Mock: return "mock";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  for (auto b : {Backend::Live, Backend::Replay, Backend::Mock}) {
    if (to_string(b) == name) return b;
  }
  throw ParseError("unknown llm backend '" + std::string(name) + "'");
}

void validate(const LlmConfig& cfg) {
  if (cfg.model.empty()) throw ContractError("llm: model name is empty");
  if (!(cfg.temperature >= 0.0)) throw ContractError("llm: temperature must be >= 0");
  if (cfg.max_retries < 0) throw ContractError("llm: max_retries must be >= 0");
  if (!(cfg.timeout_seconds > 0.0)) throw ContractError("llm: timeout_seconds must be > 0");
  if (cfg.max_in_flight < 1) throw ContractError("llm: max_in_flight must be >= 1");
  if (cfg.backend == Backend::Live) {
    if (cfg.endpoint.empty()) throw ContractError("llm: live backend needs an endpoint");
    if (cfg.api_key_env.empty()) {
      throw ContractError("llm: live backend needs an api_key_env variable name");
    }
  }
}

nlohmann::json to_json(const LlmConfig& cfg) {
  return {{"backend", to_string(cfg.backend)},
          {"model", cfg.model},
          {"temperature", cfg.temperature},
          {"endpoint", cfg.endpoint},
          {"api_key_env", cfg.api_key_env},
          {"max_retries", cfg.max_retries},
          {"timeout_seconds", cfg.timeout_seconds},
          {"max_in_flight", cfg.max_in_flight}};
}

LlmConfig llm_config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {"backend",     "model",       "temperature",
                                              "endpoint",    "api_key_env", "max_retries",
                                              "timeout_seconds", "max_in_flight"};
  if (!j.is_object()) throw ParseError("llm config must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ParseError("llm config: unknown key '" + key + "'");
  }
  LlmConfig cfg;
  try {
    if (j.contains("backend")) cfg.backend = parse_backend(j["backend"].get<std::string>());
    cfg.model = j.value("model", cfg.model);
    cfg.temperature = j.value("temperature", cfg.temperature);
    cfg.endpoint = j.value("endpoint", cfg.endpoint);
    cfg.api_key_env = j.value("api_key_env", cfg.api_key_env);
    cfg.max_retries = j.value("max_retries", cfg.max_retries);
    cfg.timeout_seconds = j.value("timeout_seconds", cfg.timeout_seconds);
    cfg.max_in_flight = j.value("max_in_flight", cfg.max_in_flight);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("llm config: ") + e.what());
  }
  return cfg;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string request_digest(std::string_view prompt, const ChatParams& params) {
  std::string bytes = util::normalize_newlines(prompt);
  bytes += '\0';
  bytes += params.model;
  bytes += '\0';
  bytes += shortest(params.temperature);
  return util::sha256_hex(bytes);
}

std::string config_digest(const ChatParams& params) {
  return util::sha256_hex(params.model + '\0' + shortest(params.temperature));
}

}  // namespace redahd::llm
