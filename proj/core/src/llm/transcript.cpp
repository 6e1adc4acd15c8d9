#include "redahd/llm/transcript.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

#include "redahd/error.hpp"
#include "redahd/util/digest.hpp"
#include "redahd/util/files.hpp"

namespace redahd::llm {

using nlohmann::json;

std::string Transcript::identity() const {
  json j = json::array();
  j.push_back(config_digest(params));
  for (const auto& e : entries) j.push_back({e.seq, e.digest, e.prompt, e.response});
  return util::sha256_hex(j.dump());
}

std::string transcript_header_line(const ChatParams& params) {
  json h = {{"type", "header"},
            {"config_digest", config_digest(params)},
            {"model", params.model},
            {"temperature", params.temperature}};
  return h.dump();
}

std::string transcript_entry_line(const TranscriptEntry& e) {
  json j = {{"seq", e.seq},
            {"digest", e.digest},
            {"prompt", e.prompt},
            {"response", e.response},
            {"timestamp", e.timestamp}};
  return j.dump();
}

std::string transcript_to_jsonl(const Transcript& t) {
  std::string out = transcript_header_line(t.params) + "\n";
  for (const auto& e : t.entries) out += transcript_entry_line(e) + "\n";
  return out;
}

Transcript transcript_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Transcript t;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (!have_header) {
        if (j.value("type", "") != "header") throw ParseError("missing header");
        t.params.model = j.at("model").get<std::string>();
        t.params.temperature = j.at("temperature").get<double>();
        if (j.at("config_digest").get<std::string>() != config_digest(t.params)) {
          throw ParseError("header config_digest does not match its model/temperature");
        }
        have_header = true;
        continue;
      }
      TranscriptEntry e;
      e.seq = j.at("seq").get<std::size_t>();
      e.digest = j.at("digest").get<std::string>();
      e.prompt = j.at("prompt").get<std::string>();
      e.response = j.at("response").get<std::string>();
      e.timestamp = j.value("timestamp", "");
      if (e.seq != t.entries.size()) {
        throw ParseError("expected seq " + std::to_string(t.entries.size()));
      }
      t.entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ParseError("transcript line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const ParseError& ex) {
      throw ParseError("transcript line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (!have_header) throw ParseError("transcript: empty file");
  return t;
}

Transcript read_transcript(const std::filesystem::path& path) {
  return transcript_from_jsonl(util::read_file(path));
}

void write_transcript(const Transcript& transcript, const std::filesystem::path& path) {
  util::write_file(path, transcript_to_jsonl(transcript));
}

}  // namespace redahd::llm
