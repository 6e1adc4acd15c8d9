#include <httplib.h>

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <regex>
#include <thread>

#include "redahd/error.hpp"
#include "redahd/llm/client.hpp"

namespace redahd::llm {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ContractError("llm: bad endpoint URL '" + url + "'");
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

struct LiveClient::Impl {
  LlmConfig cfg;
  Endpoint endpoint;
  std::string api_key;
  Sleeper sleep;

  std::mutex mutex;
  std::condition_variable cv;
  int in_flight = 0;
};

LiveClient::LiveClient(const LlmConfig& cfg, Sleeper sleeper)
    : Client(params_of(cfg)), impl_(std::make_unique<Impl>()) {
  validate(cfg);
  impl_->cfg = cfg;
  impl_->endpoint = split_url(cfg.endpoint);
  const char* key = std::getenv(cfg.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw LlmError("llm: environment variable " + cfg.api_key_env + " is not set");
  }
  impl_->api_key = key;
  impl_->sleep = sleeper ? std::move(sleeper) : [](double s) {
    std::this_thread::sleep_for(std::chrono::duration<double>(s));
  };
}

LiveClient::~LiveClient() = default;

ChatExchange LiveClient::do_exchange(const std::string& prompt) {
  Impl& im = *impl_;
  {
    std::unique_lock lock(im.mutex);
    im.cv.wait(lock, [&] { return im.in_flight < im.cfg.max_in_flight; });
    ++im.in_flight;
  }
  struct Release {
    Impl& im;
    ~Release() {
      std::lock_guard lock(im.mutex);
      --im.in_flight;
      im.cv.notify_one();
    }
  } release{im};

  const nlohmann::json body = {
      {"model", im.cfg.model},
      {"temperature", im.cfg.temperature},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  const std::string payload = body.dump();
  const httplib::Headers headers = {{"Authorization", "Bearer " + im.api_key}};

  std::string last_error;
  double delay = 1.0;
  for (int attempt = 0; attempt <= im.cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      im.sleep(delay);
      delay *= 2.0;
    }
    httplib::Client http(im.endpoint.origin);
    const auto timeout = std::chrono::duration<double>(im.cfg.timeout_seconds);
    http.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    http.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    http.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

    auto res = http.Post(im.endpoint.path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
      if (retryable(res->status)) continue;
      throw LlmError("llm: " + last_error);
    }
    try {
      const auto j = nlohmann::json::parse(res->body);
      ChatExchange ex{prompt, params(),
                      j.at("choices").at(0).at("message").at("content").get<std::string>(),
                      std::nullopt};
      if (j.contains("usage") && j["usage"].is_object()) {
        ex.usage = Usage{j["usage"].value("prompt_tokens", 0L),
                         j["usage"].value("completion_tokens", 0L)};
      }
      return ex;
    } catch (const nlohmann::json::exception& e) {
      throw LlmError(std::string("llm: malformed chat-completion response: ") + e.what());
    }
  }
  throw LlmError("llm: giving up after " + std::to_string(im.cfg.max_retries + 1) +
                 " attempts; last error " + last_error);
}

}  // namespace redahd::llm
