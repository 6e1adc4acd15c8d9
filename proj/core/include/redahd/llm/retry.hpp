#pragma once

#include <string>
#include <utility>

#include "redahd/error.hpp"
#include "redahd/llm/client.hpp"
#include "redahd/prompts.hpp"

namespace redahd::llm {

// Asks once plus up to `retries` more times. parse(response) either returns
// the value or throws ExtractionError; each retry repeats the original prompt
// with the previous failure appended. LlmError is not retried here.
template <class Parse>
auto ask_with_retries(Client& client, const std::string& prompt, int retries, Parse&& parse)
    -> decltype(parse(std::string{})) {
  std::string current = prompt;
  for (int attempt = 0;; ++attempt) {
    const std::string response = client.complete(current);
    try {
      return parse(response);
    } catch (const ExtractionError& e) {
      if (attempt >= retries)
        throw ExtractionError(std::string(e.what()) + " (after " + std::to_string(attempt + 1) +
                              " attempts)");
      current = prompts::with_feedback(prompt, e.what());
    }
  }
}

}  // namespace redahd::llm
