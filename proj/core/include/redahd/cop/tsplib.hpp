#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "redahd/cop/types.hpp"

namespace redahd::cop {

struct TsplibProblem {
  std::string name;
  TspInstance instance;
};

// TSPLIB nint(): round half away from zero.
int tsplib_nint(double value);

// EUC_2D distances rounded to the nearest integer.
Matrix tsplib_euc2d_distances(const std::vector<Point>& coords);

// Parses the TYPE: TSP / EDGE_WEIGHT_TYPE: EUC_2D subset. Node ids are
// remapped to 0-based positions in NODE_COORD_SECTION order. Throws ParseError.
TsplibProblem parse_tsplib(std::string_view text);

// "name optimum" per line; blank lines and '#' comments are skipped.
std::vector<std::pair<std::string, double>> parse_optima_table(std::string_view text);

}  // namespace redahd::cop
