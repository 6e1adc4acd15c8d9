#include "redahd/llm/client.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "redahd/error.hpp"

namespace redahd::llm {

ChatExchange Client::exchange(const std::string& prompt) {
  if (prompt.empty()) throw ContractError("llm: empty prompt");
  ChatExchange ex = do_exchange(prompt);
  if (ex.response.empty()) throw LlmError("llm: empty response");
  return ex;
}

// --- replay ----------------------------------------------------------------

ReplayClient::ReplayClient(Transcript transcript, ChatParams params, ReplayMode mode)
    : Client(params), transcript_(std::move(transcript)), mode_(mode) {
  if (config_digest(transcript_.params) != config_digest(params)) {
    throw LlmError("replay: transcript was recorded with model '" + transcript_.params.model +
                   "' / temperature " + std::to_string(transcript_.params.temperature) +
                   ", config asks for '" + params.model + "' / " +
                   std::to_string(params.temperature));
  }
  for (std::size_t i = 0; i < transcript_.entries.size(); ++i) {
    by_digest_[transcript_.entries[i].digest].push_back(i);
  }
}

std::size_t ReplayClient::cursor() const {
  std::lock_guard lock(mutex_);
  return cursor_;
}

void ReplayClient::seek(std::size_t position) {
  std::lock_guard lock(mutex_);
  if (mode_ != ReplayMode::Sequential) throw ContractError("replay: seek needs sequential mode");
  if (position > transcript_.entries.size()) throw ContractError("replay: seek past end");
  cursor_ = position;
}

ChatExchange ReplayClient::do_exchange(const std::string& prompt) {
  const std::string digest = request_digest(prompt, params());
  std::lock_guard lock(mutex_);
  std::size_t index = 0;
  if (mode_ == ReplayMode::Sequential) {
    if (cursor_ >= transcript_.entries.size()) {
      throw LlmError("replay: transcript exhausted at sequence index " + std::to_string(cursor_));
    }
    if (transcript_.entries[cursor_].digest != digest) {
      throw LlmError("replay: digest mismatch at sequence index " + std::to_string(cursor_) +
                     " (recorded " + transcript_.entries[cursor_].digest.substr(0, 12) +
                     ", requested " + digest.substr(0, 12) + ")");
    }
    index = cursor_;
  } else {
    auto it = by_digest_.find(digest);
    if (it == by_digest_.end() || it->second.empty()) {
      throw LlmError("replay: no unused entry with digest " + digest.substr(0, 12));
    }
    index = it->second.front();
    it->second.pop_front();
  }
  ++cursor_;
  return {prompt, params(), transcript_.entries[index].response, std::nullopt};
}

// --- mock ------------------------------------------------------------------

MockClient& MockClient::on(const std::string& pattern, std::string response) {
  rules_.push_back({std::regex(pattern), std::move(response)});
  return *this;
}

MockClient& MockClient::fallback(Responder responder) {
  fallback_ = std::move(responder);
  return *this;
}

std::size_t MockClient::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

ChatExchange MockClient::do_exchange(const std::string& prompt) {
  std::lock_guard lock(mutex_);
  ++calls_;
  for (const auto& rule : rules_) {
    if (std::regex_search(prompt, rule.pattern)) return {prompt, params(), rule.response, {}};
  }
  if (fallback_) {
    if (auto r = fallback_(prompt)) return {prompt, params(), std::move(*r), {}};
  }
  throw LlmError("mock: no rule matches prompt starting '" + prompt.substr(0, 60) + "'");
}

// --- recording -------------------------------------------------------------

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RecordingClient::RecordingClient(std::shared_ptr<Client> inner,
                                 std::optional<std::filesystem::path> path)
    : Client(inner->params()), inner_(std::move(inner)), path_(std::move(path)) {
  transcript_.params = params();
  if (path_) {
    std::ofstream out(*path_, std::ios::trunc);
    if (!out) throw Error("cannot open transcript " + path_->string());
    out << transcript_header_line(transcript_.params) << '\n';
  }
}

Transcript RecordingClient::transcript() const {
  std::lock_guard lock(mutex_);
  return transcript_;
}

ChatExchange RecordingClient::do_exchange(const std::string& prompt) {
  ChatExchange ex = inner_->exchange(prompt);
  std::lock_guard lock(mutex_);
  TranscriptEntry e;
  e.seq = transcript_.entries.size();
  e.digest = request_digest(prompt, params());
  e.prompt = prompt;
  e.response = ex.response;
  e.timestamp = utc_now();
  if (path_) {
    std::ofstream out(*path_, std::ios::app);
    out << transcript_entry_line(e) << '\n';
    if (!out) throw Error("cannot append to transcript " + path_->string());
  }
  transcript_.entries.push_back(std::move(e));
  return ex;
}

// ---------------------------------------------------------------------------

std::shared_ptr<Client> make_client(const LlmConfig& cfg,
                                    const std::optional<std::filesystem::path>& transcript,
                                    MockClient::Responder mock_responder) {
  validate(cfg);
  switch (cfg.backend) {
    case Backend::Live:
      return std::make_shared<LiveClient>(cfg);
    case Backend::Replay:
      if (!transcript) throw ContractError("replay backend needs a transcript path");
      return std::make_shared<ReplayClient>(read_transcript(*transcript), params_of(cfg));
    case Backend::Mock: {
      auto mock = std::make_shared<MockClient>(params_of(cfg));
      if (mock_responder) mock->fallback(std::move(mock_responder));
      return mock;
    }
  }
  throw ContractError("unknown backend");
}

}  // namespace redahd::llm
