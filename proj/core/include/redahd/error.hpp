#pragma once

#include <stdexcept>
#include <string>

namespace redahd {

// Base for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (kind mismatch, objective on an
// invalid solution, refinement below the stagnation threshold, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed external input: TSPLIB text, dataset lines, config files, wire
// messages.
class ParseError : public Error {
 public:
  using Error::Error;
};

// The generated program under test misbehaved (wrong-length score vector,
// non-finite scores). Caught by the fitness evaluator and turned into a status.
class EvaluationFailure : public Error {
 public:
  using Error::Error;
};

// Chat-completion failures: network/auth after retries, replay digest
// mismatch, mock pattern miss.
class LlmError : public Error {
 public:
  using Error::Error;
};

// A model response lacked the expected description or code. Triggers a retry
// at the call site.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

}  // namespace redahd
