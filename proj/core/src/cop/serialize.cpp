#include "redahd/cop/serialize.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "redahd/error.hpp"
#include "redahd/util/files.hpp"

namespace redahd::cop {

namespace {

using nlohmann::json;

json points_to_json(const std::vector<Point>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back({p.x, p.y});
  return out;
}

std::vector<Point> points_from_json(const json& j) {
  std::vector<Point> pts;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 2) throw ParseError("coords rows must be [x, y]");
    pts.push_back({row[0].get<double>(), row[1].get<double>()});
  }
  return pts;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

std::vector<double> reals(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of numbers");
  return j.get<std::vector<double>>();
}

int index_from_json(const json& j) {
  if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw ParseError("index out of int range");
    }
    return static_cast<int>(v);
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 2e9) {
      return static_cast<int>(v);
    }
  }
  throw ParseError("expected an integral index, got " + j.dump());
}

std::vector<int> indices(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of indices, got " + j.dump());
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(index_from_json(v));
  return out;
}

std::vector<std::vector<int>> index_lists(const json& j) {
  if (!j.is_array()) throw ParseError("expected a list of index lists, got " + j.dump());
  std::vector<std::vector<int>> out;
  for (const auto& row : j) out.push_back(indices(row));
  return out;
}

void check_square(const Matrix& d, std::size_t n, const char* what) {
  if (d.rows() != n || d.cols() != n) {
    throw ParseError(std::string(what) + ": distance matrix does not match coords");
  }
}

}  // namespace

json instance_to_json(const Instance& instance) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        json j;
        if constexpr (std::is_same_v<T, TspInstance>) {
          j["coords"] = points_to_json(x.coords);
          j["distances"] = matrix_to_json(x.distances);
        } else if constexpr (std::is_same_v<T, CvrpInstance>) {
          j["coords"] = points_to_json(x.coords);
          j["distances"] = matrix_to_json(x.distances);
          j["demands"] = x.demands;
          j["capacity"] = x.capacity;
        } else if constexpr (std::is_same_v<T, BppInstance>) {
          j["item_sizes"] = x.item_sizes;
          j["capacity"] = x.capacity;
        } else if constexpr (std::is_same_v<T, ObppInstance>) {
          j["item_stream"] = x.item_stream;
          j["capacity"] = x.capacity;
        } else if constexpr (std::is_same_v<T, KpInstance>) {
          j["weights"] = x.weights;
          j["values"] = x.values;
          j["capacity"] = x.capacity;
        } else {
          j["values"] = x.values;
          j["weights"] = matrix_to_json(x.weights);
          j["constraints"] = x.constraints;
        }
        return j;
      },
      instance);
}

Instance instance_from_json(CopKind kind, const json& p) {
  try {
    switch (kind) {
      case CopKind::Tsp: {
        TspInstance x;
        x.coords = points_from_json(p.at("coords"));
        x.distances = p.contains("distances") ? matrix_from_json(p.at("distances"))
                                              : euclidean_distances(x.coords);
        check_square(x.distances, x.coords.size(), "tsp");
        return x;
      }
      case CopKind::Cvrp: {
        CvrpInstance x;
        x.coords = points_from_json(p.at("coords"));
        x.distances = p.contains("distances") ? matrix_from_json(p.at("distances"))
                                              : euclidean_distances(x.coords);
        check_square(x.distances, x.coords.size(), "cvrp");
        x.demands = reals(p.at("demands"));
        x.capacity = p.at("capacity").get<double>();
        if (x.demands.size() != x.coords.size()) {
          throw ParseError("cvrp: demands length does not match coords");
        }
        return x;
      }
      case CopKind::Bpp: {
        BppInstance x;
        x.item_sizes = reals(p.at("item_sizes"));
        x.capacity = p.at("capacity").get<double>();
        return x;
      }
      case CopKind::Obpp: {
        ObppInstance x;
        x.item_stream = reals(p.at("item_stream"));
        x.capacity = p.at("capacity").get<double>();
        return x;
      }
      case CopKind::Kp: {
        KpInstance x;
        x.weights = reals(p.at("weights"));
        x.values = reals(p.at("values"));
        x.capacity = p.at("capacity").get<double>();
        if (x.weights.size() != x.values.size()) {
          throw ParseError("kp: weights and values differ in length");
        }
        return x;
      }
      case CopKind::Mkp: {
        MkpInstance x;
        x.values = reals(p.at("values"));
        x.weights = matrix_from_json(p.at("weights"));
        x.constraints = reals(p.at("constraints"));
        if (x.weights.rows() != x.constraints.size() ||
            (x.weights.rows() > 0 && x.weights.cols() != x.values.size())) {
          throw ParseError("mkp: weights must be M x N");
        }
        return x;
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string(to_string(kind)) + " payload: " + e.what());
  }
  throw ParseError("unknown kind");
}

json solution_to_json(const Solution& solution) {
  return std::visit(
      [](const auto& y) -> json {
        using T = std::decay_t<decltype(y)>;
        if constexpr (std::is_same_v<T, TspSolution>) return y.tour;
        else if constexpr (std::is_same_v<T, CvrpSolution>) return y.routes;
        else if constexpr (std::is_same_v<T, BppSolution>) return y.bins;
        else if constexpr (std::is_same_v<T, ObppSolution>) return y.assignment;
        else if constexpr (std::is_same_v<T, KpSolution>) return y.items;
        else return y.knapsacks;
      },
      solution);
}

Solution solution_from_json(CopKind kind, const json& p) {
  switch (kind) {
    case CopKind::Tsp: return TspSolution{indices(p)};
    case CopKind::Cvrp: return CvrpSolution{index_lists(p)};
    case CopKind::Bpp: return BppSolution{index_lists(p)};
    case CopKind::Obpp: return ObppSolution{indices(p)};
    case CopKind::Kp: return KpSolution{indices(p)};
    case CopKind::Mkp: return MkpSolution{index_lists(p)};
  }
  throw ParseError("unknown kind");
}

std::string dataset_to_jsonl(const Dataset& dataset) {
  check_dataset(dataset);
  json header;
  header["kind"] = to_string(dataset.kind);
  header["count"] = dataset.instances.size();
  header["seed"] = dataset.metadata.seed;
  header["source"] = dataset.metadata.source;
  header["params"] = json::parse(dataset.metadata.params_json.empty()
                                     ? std::string("{}")
                                     : dataset.metadata.params_json);
  std::string out = header.dump() + "\n";
  for (const auto& instance : dataset.instances) {
    json line;
    line["kind"] = to_string(dataset.kind);
    line["payload"] = instance_to_json(instance);
    out += line.dump();
    out += '\n';
  }
  return out;
}

Dataset dataset_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Dataset dataset;
  std::size_t expected = 0;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      if (!have_header) {
        dataset.kind = parse_kind(j.at("kind").get<std::string>());
        expected = j.at("count").get<std::size_t>();
        dataset.metadata.seed = j.value("seed", 0ULL);
        dataset.metadata.source = j.value("source", std::string());
        dataset.metadata.params_json = j.contains("params") ? j["params"].dump() : "{}";
        have_header = true;
        continue;
      }
      const CopKind kind = parse_kind(j.at("kind").get<std::string>());
      if (kind != dataset.kind) {
        throw ParseError("dataset line " + std::to_string(line_no) + ": kind mismatch");
      }
      dataset.instances.push_back(instance_from_json(kind, j.at("payload")));
    } catch (const json::exception& e) {
      throw ParseError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw ParseError("dataset: missing header line");
  if (dataset.instances.size() != expected) {
    throw ParseError("dataset: header declares " + std::to_string(expected) +
                     " instances, found " + std::to_string(dataset.instances.size()));
  }
  check_dataset(dataset);
  return dataset;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  util::write_file(path, dataset_to_jsonl(dataset));
}

Dataset read_dataset(const std::filesystem::path& path) {
  return dataset_from_jsonl(util::read_file(path));
}

}  // namespace redahd::cop
