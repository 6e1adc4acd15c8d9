#include "redahd/llm/parse.hpp"

#include <cctype>
#include <regex>
#include <sstream>

#include "redahd/error.hpp"

namespace redahd::llm {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// fenced[i] is true for characters inside (or forming) a ``` block. An
// unterminated fence runs to the end.
std::vector<bool> fence_mask(std::string_view text) {
  std::vector<bool> mask(text.size(), false);
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    std::size_t close = text.find("```", open + 3);
    const std::size_t end = close == std::string_view::npos ? text.size() : close + 3;
    for (std::size_t i = open; i < end; ++i) mask[i] = true;
    if (close == std::string_view::npos) break;
    pos = end;
  }
  return mask;
}


std::vector<std::string> fenced_blocks(std::string_view text) {
  std::vector<std::string> blocks;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    std::size_t body = text.find('\n', open + 3);
    if (body == std::string_view::npos) break;
    ++body;
    const std::size_t close = text.find("```", body);
    blocks.emplace_back(text.substr(body, (close == std::string_view::npos ? text.size() : close) - body));
    if (close == std::string_view::npos) break;
    pos = close + 3;
  }
  return blocks;
}

}  // namespace

std::string extract_braced_description(std::string_view response) {
  const auto mask = fence_mask(response);
  for (std::size_t i = 0; i < response.size(); ++i) {
    if (mask[i] || response[i] != '{') continue;
    int depth = 0;
    for (std::size_t j = i; j < response.size(); ++j) {
      if (mask[j]) continue;
      if (response[j] == '{') ++depth;
      if (response[j] == '}' && --depth == 0) return trim(response.substr(i + 1, j - i - 1));
    }
    break;
  }
  throw ExtractionError("no {description} found outside code fences");
}

std::vector<std::string> extract_double_braced(std::string_view response) {
  const auto mask = fence_mask(response);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = response.find("{{", pos);
    if (open == std::string_view::npos) break;
    if (mask[open]) {
      pos = open + 2;
      continue;
    }
    const std::size_t close = response.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    std::string item = trim(response.substr(open + 2, close - open - 2));
    if (!item.empty()) out.push_back(std::move(item));
    pos = close + 2;
  }
  if (out.empty()) throw ExtractionError("no {{...}} items found");
  return out;
}

std::string extract_code(std::string_view response, const std::vector<std::string>& required_names) {
  if (required_names.empty()) throw ContractError("extract_code: required_names is empty");
  std::string code;
  const auto blocks = fenced_blocks(response);
  if (!blocks.empty()) {
    for (const auto& b : blocks) {
      if (!code.empty() && code.back() != '\n') code += '\n';
      code += b;
    }
  } else {
    static const std::regex start(R"((^|\n)(import|from|def|class)\b)");
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_search(response.begin(), response.end(), m, start)) {
      code = std::string(response.substr(static_cast<std::size_t>(m.position(2))));
    }
  }
  while (!code.empty() && std::isspace(static_cast<unsigned char>(code.back()))) code.pop_back();

  std::string missing;
  for (const auto& name : required_names) {
    const std::regex def("(^|\\n)[ \\t]*def[ \\t]+" + name + "[ \\t]*\\(");
    if (!std::regex_search(code, def)) missing += (missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) throw ExtractionError("code does not define: " + missing);
  return code;
}

}  // namespace redahd::llm
