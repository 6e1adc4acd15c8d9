#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "redahd/llm/config.hpp"

namespace redahd::llm {

struct TranscriptEntry {
  std::size_t seq = 0;
  std::string digest;
  std::string prompt;
  std::string response;
  std::string timestamp;  // ISO-8601 UTC; excluded from identity()
};

struct Transcript {
  ChatParams params;
  std::vector<TranscriptEntry> entries;

  // Digest of params and the (seq, digest, prompt, response) of every entry.
  std::string identity() const;
};

// Header line {"config_digest", "model", "temperature", "type":"header"}
// then one entry per line.
std::string transcript_header_line(const ChatParams& params);
std::string transcript_entry_line(const TranscriptEntry& entry);
std::string transcript_to_jsonl(const Transcript& transcript);
Transcript transcript_from_jsonl(const std::string& text);

Transcript read_transcript(const std::filesystem::path& path);
void write_transcript(const Transcript& transcript, const std::filesystem::path& path);

}  // namespace redahd::llm
