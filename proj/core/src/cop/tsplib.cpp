#include "redahd/cop/tsplib.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <sstream>
#include <string>

#include "redahd/error.hpp"

namespace redahd::cop {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

}  // namespace

int tsplib_nint(double value) { return static_cast<int>(std::floor(value + 0.5)); }

Matrix tsplib_euc2d_distances(const std::vector<Point>& coords) {
  const std::size_t n = coords.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = coords[i].x - coords[j].x;
      const double dy = coords[i].y - coords[j].y;
      const double dist = tsplib_nint(std::sqrt(dx * dx + dy * dy));
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

TsplibProblem parse_tsplib(std::string_view text) {
  TsplibProblem problem;
  std::string type;
  std::string edge_weight_type;
  long dimension = -1;
  bool saw_coords = false;

  const auto lines = lines_of(text);
  std::size_t i = 0;
  while (i < lines.size()) {
    const std::string line = trim(lines[i]);
    ++i;
    if (line.empty()) continue;
    const std::string key_upper = upper(line);
    if (key_upper == "EOF") break;
    if (key_upper == "NODE_COORD_SECTION") {
      if (dimension <= 0) throw ParseError("tsplib: NODE_COORD_SECTION before DIMENSION");
      saw_coords = true;
      while (i < lines.size()) {
        const std::string row = trim(lines[i]);
        if (row.empty()) {
          ++i;
          continue;
        }
        if (std::isalpha(static_cast<unsigned char>(row[0]))) break;  // next keyword / EOF
        std::istringstream in(row);
        long id = 0;
        double x = 0.0;
        double y = 0.0;
        if (!(in >> id >> x >> y)) {
          throw ParseError("tsplib: malformed coordinate line '" + row + "'");
        }
        std::string extra;
        if (in >> extra) throw ParseError("tsplib: trailing data on line '" + row + "'");
        problem.instance.coords.push_back({x, y});
        ++i;
      }
      continue;
    }
    if (key_upper.find("_SECTION") != std::string::npos) {
      throw ParseError("tsplib: unsupported section " + line);
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("tsplib: malformed line '" + line + "'");
    const std::string key = upper(trim(std::string_view(line).substr(0, colon)));
    const std::string value = trim(std::string_view(line).substr(colon + 1));
    if (key == "NAME") {
      problem.name = value;
    } else if (key == "TYPE") {
      type = upper(value);
    } else if (key == "EDGE_WEIGHT_TYPE") {
      edge_weight_type = upper(value);
    } else if (key == "DIMENSION") {
      const auto res = std::from_chars(value.data(), value.data() + value.size(), dimension);
      if (res.ec != std::errc() || dimension <= 0) {
        throw ParseError("tsplib: bad DIMENSION '" + value + "'");
      }
    }
    // COMMENT and other specification keywords are ignored.
  }

  if (type != "TSP") throw ParseError("tsplib: unsupported TYPE '" + type + "'");
  if (edge_weight_type != "EUC_2D") {
    throw ParseError("tsplib: unsupported EDGE_WEIGHT_TYPE '" + edge_weight_type + "'");
  }
  if (!saw_coords) throw ParseError("tsplib: missing NODE_COORD_SECTION");
  if (static_cast<long>(problem.instance.coords.size()) != dimension) {
    throw ParseError("tsplib: DIMENSION " + std::to_string(dimension) + " but " +
                     std::to_string(problem.instance.coords.size()) + " coordinates");
  }
  problem.instance.distances = tsplib_euc2d_distances(problem.instance.coords);
  return problem;
}

std::vector<std::pair<std::string, double>> parse_optima_table(std::string_view text) {
  std::vector<std::pair<std::string, double>> table;
  for (const auto& raw : lines_of(text)) {
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::string name;
    double optimum = 0.0;
    if (!(in >> name >> optimum)) throw ParseError("optima table: malformed line '" + line + "'");
    table.emplace_back(name, optimum);
  }
  return table;
}

}  // namespace redahd::cop
