#include "redahd/cop/types.hpp"

#include <cmath>
#include <string>

#include "redahd/error.hpp"

namespace redahd::cop {

std::string_view to_string(CopKind kind) {
  switch (kind) {
    case CopKind::Tsp: return "tsp";
    case CopKind::Cvrp: return "cvrp";
    case CopKind::Bpp: return "bpp";
    case CopKind::Obpp: return "obpp";
    case CopKind::Kp: return "kp";
    case CopKind::Mkp: return "mkp";
  }
  return "unknown";
}

CopKind parse_kind(std::string_view name) {
  for (CopKind kind : kAllKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw ParseError("unknown COP kind '" + std::string(name) + "'");
}

bool is_minimization(CopKind kind) {
  return kind != CopKind::Kp && kind != CopKind::Mkp;
}

Matrix euclidean_distances(const std::vector<Point>& coords) {
  const std::size_t n = coords.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist =
          std::hypot(coords[i].x - coords[j].x, coords[i].y - coords[j].y);
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

CopKind kind_of(const Instance& instance) {
  return static_cast<CopKind>(instance.index());
}

CopKind kind_of(const Solution& solution) {
  return static_cast<CopKind>(solution.index());
}

std::size_t size_of(const Instance& instance) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TspInstance>) {
          return x.coords.size();
        } else if constexpr (std::is_same_v<T, CvrpInstance>) {
          return x.demands.empty() ? 0 : x.demands.size() - 1;
        } else if constexpr (std::is_same_v<T, BppInstance>) {
          return x.item_sizes.size();
        } else if constexpr (std::is_same_v<T, ObppInstance>) {
          return x.item_stream.size();
        } else if constexpr (std::is_same_v<T, KpInstance>) {
          return x.weights.size();
        } else {
          return x.values.size();
        }
      },
      instance);
}

void check_dataset(const Dataset& dataset) {
  if (dataset.instances.empty()) throw ContractError("dataset has no instances");
  for (const auto& instance : dataset.instances) {
    if (kind_of(instance) != dataset.kind) {
      throw ContractError("dataset mixes COP kinds");
    }
  }
}

}  // namespace redahd::cop
