#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "redahd/cop/types.hpp"
#include "redahd/llm/client.hpp"
#include "redahd/util/random.hpp"

// A stand-in for the model: recognises each prompt kind by its wording and
// answers with code carrying native markers (see natives.hpp), so whole runs
// execute in-process.
//
// Heuristics climb a per-kind ladder of native solvers, weakest first.
// Initialization picks a random rung below the top; E2 moves to the better
// parent's rung or one above; M1 moves at most one rung either way. Noisy
// rungs get fresh seed=/jitter= parameters, jitter shrinking under mutation.
namespace redahd::fixtures {

struct DesignerOptions {
  // Reduction marker per candidate problem, cycled; default "<kind>.identity".
  std::vector<std::string> reductions;
  // Marker swap applied when asked to refine a reduction; unlisted markers
  // come back unchanged.
  std::map<std::string, std::string> refinements;
  // Number of candidate problems to offer; 0 offers as many as asked.
  std::size_t candidates = 0;
  // Every k-th heuristic answer leaves out the braced description (0: never).
  std::size_t malformed_every = 0;
};

class ScriptedDesigner {
 public:
  ScriptedDesigner(cop::CopKind kind, std::uint64_t seed, DesignerOptions options = {});

  std::optional<std::string> respond(const std::string& prompt);

  // Shares this designer; the responder can outlive the caller's reference.
  static llm::MockClient::Responder responder(std::shared_ptr<ScriptedDesigner> designer);

 private:
  std::string candidates(const std::string& prompt);
  std::string reduction_code(const std::string& marker) const;
  std::string template_code() const;
  std::string heuristic(const std::string& prompt, int mode);
  std::string marker_for(std::size_t rung);

  cop::CopKind kind_;
  DesignerOptions options_;
  std::mutex mutex_;
  util::Rng rng_;
  std::size_t heuristics_ = 0;
  std::size_t next_seed_ = 1;
};

std::shared_ptr<llm::MockClient> scripted_client(cop::CopKind kind, std::uint64_t seed,
                                                 DesignerOptions options = {});

}  // namespace redahd::fixtures
