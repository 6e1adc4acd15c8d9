#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "redahd/cop/types.hpp"

namespace redahd::cop {

enum class ViolationCode {
  WrongLength,        // tour / assignment has the wrong number of entries
  IndexOutOfRange,    // node, customer or item id outside the instance
  DuplicateIndex,     // visited or selected more than once
  MissingIndex,       // node / customer / item never visited or packed
  CapacityExceeded,   // bin, vehicle or knapsack overloaded
  EmptyRoute,         // CVRP sub-route or BPP bin with no entries
  BinNotOpened,       // OBPP assignment skips ahead of the next bin id
  WrongKnapsackCount, // MKP solution does not list exactly M knapsacks
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string detail;
  std::vector<int> indices;  // instance-local ids involved
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool has(ViolationCode code) const;
};

// Lists every violated feasibility constraint. Throws ContractError on a kind
// mismatch between instance and solution.
ValidationReport validate(const Instance& instance, const Solution& solution);

}  // namespace redahd::cop
