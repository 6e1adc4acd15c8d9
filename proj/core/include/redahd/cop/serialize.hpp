#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "redahd/cop/types.hpp"

namespace redahd::cop {

// Payloads use the field names of the instance structs: coords as [[x, y]],
// matrices as nested row arrays.
nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(CopKind kind, const nlohmann::json& payload);

nlohmann::json solution_to_json(const Solution& solution);
// Integral JSON numbers are accepted as indices (3 and 3.0 alike); any other
// shape raises ParseError.
Solution solution_from_json(CopKind kind, const nlohmann::json& payload);

// JSON-lines dataset: a header {"count","kind","params","seed","source"} then
// one {"kind","payload"} line per instance. Keys are emitted sorted, so the
// bytes are a pure function of the dataset.
std::string dataset_to_jsonl(const Dataset& dataset);
Dataset dataset_from_jsonl(const std::string& text);

void write_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace redahd::cop
