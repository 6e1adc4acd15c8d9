#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "redahd/sandbox/protocol.hpp"

namespace redahd::sandbox {

struct SubprocessOptions {
  // Added to the request's timeout to cover interpreter start-up.
  double startup_grace_seconds = 5.0;
  // RLIMIT_AS for the runner; 0 disables. Best effort.
  std::size_t memory_limit_bytes = 0;
};

// Spawns a fresh runner process per request (so guest state never leaks
// between batches), speaks the NDJSON protocol over its stdin/stdout and
// enforces the batch deadline from the host side with SIGKILL.
class SubprocessSandbox : public Sandbox {
 public:
  explicit SubprocessSandbox(std::vector<std::string> argv, SubprocessOptions options = {});

  ExecResponse execute(const ExecRequest& request) override;

 private:
  std::vector<std::string> argv_;
  SubprocessOptions options_;
};

}  // namespace redahd::sandbox
