#include "redahd/cop/generate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "redahd/error.hpp"
#include "redahd/util/random.hpp"

namespace redahd::cop {

namespace {

using nlohmann::json;
using util::Rng;

std::vector<Point> uniform_coords(Rng& rng, std::size_t count, const GeneratorParams& p) {
  std::vector<Point> coords(count);
  for (auto& pt : coords) {
    pt.x = rng.uniform(p.coord_min, p.coord_max);
    pt.y = rng.uniform(p.coord_min, p.coord_max);
  }
  return coords;
}

std::vector<double> item_sizes(Rng& rng, const GeneratorParams& p, double capacity) {
  std::vector<double> sizes(p.n);
  for (auto& s : sizes) {
    if (p.distribution == SizeDistribution::Weibull) {
      const double raw = std::round(rng.weibull(p.weibull_shape, p.weibull_scale));
      s = std::clamp(raw, 1.0, capacity);
    } else {
      s = static_cast<double>(rng.uniform_int(p.size_min, p.size_max));
    }
  }
  return sizes;
}

Instance make_one(CopKind kind, const GeneratorParams& p, Rng& rng) {
  switch (kind) {
    case CopKind::Tsp: {
      TspInstance x;
      x.coords = uniform_coords(rng, p.n, p);
      x.distances = euclidean_distances(x.coords);
      return x;
    }
    case CopKind::Cvrp: {
      CvrpInstance x;
      x.coords = uniform_coords(rng, p.n + 1, p);
      x.distances = euclidean_distances(x.coords);
      x.demands.assign(p.n + 1, 0.0);
      for (std::size_t i = 1; i <= p.n; ++i) {
        x.demands[i] = static_cast<double>(rng.uniform_int(p.demand_min, p.demand_max));
      }
      x.capacity = *p.capacity;
      return x;
    }
    case CopKind::Bpp: {
      BppInstance x;
      x.capacity = *p.capacity;
      x.item_sizes = item_sizes(rng, p, x.capacity);
      return x;
    }
    case CopKind::Obpp: {
      ObppInstance x;
      x.capacity = *p.capacity;
      x.item_stream = item_sizes(rng, p, x.capacity);
      return x;
    }
    case CopKind::Kp: {
      KpInstance x;
      x.weights.resize(p.n);
      x.values.resize(p.n);
      for (std::size_t i = 0; i < p.n; ++i) {
        x.weights[i] = rng.uniform_open01();
        x.values[i] = rng.uniform_open01();
      }
      x.capacity = *p.capacity;
      return x;
    }
    case CopKind::Mkp: {
      MkpInstance x;
      x.values.resize(p.n);
      for (auto& v : x.values) v = rng.uniform_open01();
      x.weights = Matrix(p.m, p.n);
      for (std::size_t i = 0; i < p.m; ++i) {
        for (std::size_t j = 0; j < p.n; ++j) x.weights(i, j) = rng.uniform_open01();
      }
      x.constraints.resize(p.m);
      for (std::size_t i = 0; i < p.m; ++i) {
        double max_w = 0.0;
        double sum_w = 0.0;
        for (std::size_t j = 0; j < p.n; ++j) {
          max_w = std::max(max_w, x.weights(i, j));
          sum_w += x.weights(i, j);
        }
        x.constraints[i] = rng.uniform(max_w, sum_w);
      }
      return x;
    }
  }
  throw ContractError("generate: unknown kind");
}

void check_params(CopKind kind, const GeneratorParams& p) {
  if (p.n == 0) throw ContractError("generate: n must be positive");
  if (!(p.coord_max > p.coord_min)) throw ContractError("generate: empty coordinate range");
  if (p.capacity && !(*p.capacity > 0.0)) {
    throw ContractError("generate: capacity must be positive");
  }
  switch (kind) {
    case CopKind::Cvrp:
      if (p.demand_min < 1 || p.demand_max < p.demand_min) {
        throw ContractError("generate: bad demand range");
      }
      if (p.demand_max > *p.capacity) {
        throw ContractError("generate: demand bound exceeds vehicle capacity");
      }
      break;
    case CopKind::Bpp:
    case CopKind::Obpp:
      if (p.distribution == SizeDistribution::UniformInt) {
        if (p.size_min < 1 || p.size_max < p.size_min) {
          throw ContractError("generate: bad item size range");
        }
        if (p.size_max > *p.capacity) {
          throw ContractError("generate: item size bound exceeds bin capacity");
        }
      } else if (!(p.weibull_shape > 0.0) || !(p.weibull_scale > 0.0)) {
        throw ContractError("generate: Weibull shape and scale must be positive");
      }
      break;
    case CopKind::Mkp:
      if (p.m == 0) throw ContractError("generate: m must be positive");
      break;
    default:
      break;
  }
}

}  // namespace

GeneratorParams resolve_params(CopKind kind, GeneratorParams params) {
  if (!params.capacity) {
    switch (kind) {
      case CopKind::Cvrp: params.capacity = 50.0; break;
      case CopKind::Bpp: params.capacity = 150.0; break;
      case CopKind::Obpp: params.capacity = 100.0; break;
      case CopKind::Kp: params.capacity = params.n <= 50 ? 12.5 : 25.0; break;
      default: break;
    }
  }
  return params;
}

std::string params_to_json(CopKind kind, const GeneratorParams& raw) {
  const GeneratorParams p = resolve_params(kind, raw);
  json j;
  j["n"] = p.n;
  switch (kind) {
    case CopKind::Tsp:
      j["coord_range"] = {p.coord_min, p.coord_max};
      break;
    case CopKind::Cvrp:
      j["coord_range"] = {p.coord_min, p.coord_max};
      j["capacity"] = *p.capacity;
      j["demand_range"] = {p.demand_min, p.demand_max};
      break;
    case CopKind::Bpp:
    case CopKind::Obpp:
      j["capacity"] = *p.capacity;
      if (p.distribution == SizeDistribution::Weibull) {
        j["distribution"] = "weibull";
        j["weibull_shape"] = p.weibull_shape;
        j["weibull_scale"] = p.weibull_scale;
      } else {
        j["distribution"] = "uniform_int";
        j["size_range"] = {p.size_min, p.size_max};
      }
      break;
    case CopKind::Kp:
      j["capacity"] = *p.capacity;
      break;
    case CopKind::Mkp:
      j["m"] = p.m;
      break;
  }
  return j.dump();
}

GeneratorParams params_from_json(const std::string& text) {
  GeneratorParams p;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("generator params: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("generator params must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n") p.n = value.get<std::size_t>();
      else if (key == "m") p.m = value.get<std::size_t>();
      else if (key == "capacity") p.capacity = value.get<double>();
      else if (key == "coord_range") {
        p.coord_min = value.at(0).get<double>();
        p.coord_max = value.at(1).get<double>();
      } else if (key == "demand_range") {
        p.demand_min = value.at(0).get<int>();
        p.demand_max = value.at(1).get<int>();
      } else if (key == "size_range") {
        p.size_min = value.at(0).get<int>();
        p.size_max = value.at(1).get<int>();
      } else if (key == "distribution") {
        const auto name = value.get<std::string>();
        if (name == "weibull") p.distribution = SizeDistribution::Weibull;
        else if (name == "uniform_int") p.distribution = SizeDistribution::UniformInt;
        else throw ParseError("unknown size distribution '" + name + "'");
      } else if (key == "weibull_shape") p.weibull_shape = value.get<double>();
      else if (key == "weibull_scale") p.weibull_scale = value.get<double>();
      else throw ParseError("unknown generator parameter '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("generator params: ") + e.what());
  }
  return p;
}

Dataset generate_instances(CopKind kind, const GeneratorParams& raw, std::uint64_t seed,
                           std::size_t count) {
  if (count == 0) throw ContractError("generate: count must be positive");
  const GeneratorParams params = resolve_params(kind, raw);
  check_params(kind, params);

  Dataset dataset;
  dataset.kind = kind;
  dataset.metadata.source = "generator";
  dataset.metadata.params_json = params_to_json(kind, params);
  dataset.metadata.seed = seed;
  dataset.instances.reserve(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    dataset.instances.push_back(make_one(kind, params, rng));
  }
  return dataset;
}

}  // namespace redahd::cop
