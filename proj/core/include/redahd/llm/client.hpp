#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <unordered_map>
#include <vector>

#include "redahd/llm/config.hpp"
#include "redahd/llm/transcript.hpp"

namespace redahd::llm {

struct Usage {
  long prompt_tokens = 0;
  long completion_tokens = 0;
};

struct ChatExchange {
  std::string prompt;
  ChatParams params;
  std::string response;
  std::optional<Usage> usage;
};

// One single-turn chat completion per call. Implementations are safe to share
// across threads unless stated otherwise.
class Client {
 public:
  explicit Client(ChatParams params) : params_(std::move(params)) {}
  virtual ~Client() = default;
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  // Throws ContractError on an empty prompt, LlmError on backend failure or
  // an empty response.
  ChatExchange exchange(const std::string& prompt);
  std::string complete(const std::string& prompt) { return exchange(prompt).response; }

  const ChatParams& params() const { return params_; }

 protected:
  virtual ChatExchange do_exchange(const std::string& prompt) = 0;

 private:
  ChatParams params_;
};

// ---------------------------------------------------------------------------

using Sleeper = std::function<void(double seconds)>;

// HTTP POST to an OpenAI-compatible chat-completions endpoint. Retries 429,
// 5xx and transport errors with 1s, 2s, 4s, ... backoff; other 4xx fail
// immediately.
class LiveClient : public Client {
 public:
  // Reads the API key from cfg.api_key_env now; a missing variable is an
  // LlmError naming it.
  explicit LiveClient(const LlmConfig& cfg, Sleeper sleeper = {});
  ~LiveClient() override;

 protected:
  ChatExchange do_exchange(const std::string& prompt) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------

enum class ReplayMode {
  // Entry k must answer request k; any digest difference is an error.
  Sequential,
  // Responses are looked up by digest; identical prompts are served in their
  // recorded order. For parallel callers.
  ByDigest,
};

class ReplayClient : public Client {
 public:
  // Throws LlmError if the transcript's config digest differs from params.
  ReplayClient(Transcript transcript, ChatParams params,
               ReplayMode mode = ReplayMode::Sequential);

  // Number of responses served so far.
  std::size_t cursor() const;
  // Skips ahead, e.g. when resuming from a checkpoint. Sequential mode only.
  void seek(std::size_t position);

 protected:
  ChatExchange do_exchange(const std::string& prompt) override;

 private:
  Transcript transcript_;
  ReplayMode mode_;
  mutable std::mutex mutex_;
  std::size_t cursor_ = 0;
  std::unordered_map<std::string, std::deque<std::size_t>> by_digest_;
};

// ---------------------------------------------------------------------------

// Pattern rules are tried in insertion order (ECMAScript regex search); the
// fallback responder is asked when none matches.
class MockClient : public Client {
 public:
  using Responder = std::function<std::optional<std::string>(const std::string& prompt)>;

  explicit MockClient(ChatParams params = {"mock", 1.0}) : Client(std::move(params)) {}

  MockClient& on(const std::string& pattern, std::string response);
  MockClient& always(std::string response) { return on("", std::move(response)); }
  MockClient& fallback(Responder responder);

  std::size_t calls() const;

 protected:
  ChatExchange do_exchange(const std::string& prompt) override;

 private:
  struct Rule {
    std::regex pattern;
    std::string response;
  };
  std::vector<Rule> rules_;
  Responder fallback_;
  mutable std::mutex mutex_;
  std::size_t calls_ = 0;
};

// ---------------------------------------------------------------------------

// Forwards to another client and appends every exchange to a transcript,
// optionally mirrored line-by-line to a JSONL file.
class RecordingClient : public Client {
 public:
  explicit RecordingClient(std::shared_ptr<Client> inner,
                           std::optional<std::filesystem::path> path = std::nullopt);

  Transcript transcript() const;

 protected:
  ChatExchange do_exchange(const std::string& prompt) override;

 private:
  std::shared_ptr<Client> inner_;
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mutex_;
  Transcript transcript_;
};

// Builds the client for cfg. Replay needs a transcript path.
std::shared_ptr<Client> make_client(const LlmConfig& cfg,
                                    const std::optional<std::filesystem::path>& transcript,
                                    MockClient::Responder mock_responder = {});

}  // namespace redahd::llm
