#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace redahd::llm {

// Content of the first top-level {...} outside any ``` fence, trimmed.
// Throws ExtractionError when there is none.
std::string extract_braced_description(std::string_view response);

// Every {{...}} outside fences, in order, trimmed. Used for the candidate
// problem list. Throws ExtractionError when there are none.
std::vector<std::string> extract_double_braced(std::string_view response);

// Fenced blocks concatenated in order; without fences, the suffix starting at
// the first import/def/class line. Trailing whitespace is dropped. Every required name must be defined with
// `def name(`; otherwise ExtractionError listing the missing names.
std::string extract_code(std::string_view response, const std::vector<std::string>& required_names);

}  // namespace redahd::llm
