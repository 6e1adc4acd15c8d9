#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

namespace redahd::llm {

enum class Backend { Live, Replay, Mock };

std::string_view to_string(Backend backend);
Backend parse_backend(std::string_view name);

struct LlmConfig {
  Backend backend = Backend::Mock;
  std::string model = "gpt-4o-mini";
  double temperature = 1.0;
  // Full chat-completions URL, e.g. https://api.openai.com/v1/chat/completions.
  std::string endpoint;
  // Name of the environment variable holding the API key. The key itself is
  // never stored.
  std::string api_key_env = "OPENAI_API_KEY";
  int max_retries = 3;
  double timeout_seconds = 120.0;
  int max_in_flight = 4;
};

// Throws ContractError; live needs an endpoint and a key variable name.
void validate(const LlmConfig& cfg);

nlohmann::json to_json(const LlmConfig& cfg);
// Missing keys keep their defaults; unknown keys are a ParseError.
LlmConfig llm_config_from_json(const nlohmann::json& j);

// Model and sampling parameters that go into every request digest.
struct ChatParams {
  std::string model;
  double temperature = 1.0;
};

inline ChatParams params_of(const LlmConfig& cfg) { return {cfg.model, cfg.temperature}; }

// SHA-256 over the newline-normalized prompt, the model name and the
// temperature (shortest round-trip decimal). Stable across platforms.
std::string request_digest(std::string_view prompt, const ChatParams& params);

// Digest of the parameters alone; stored in transcript headers so replays
// detect config drift before the first request.
std::string config_digest(const ChatParams& params);

}  // namespace redahd::llm
