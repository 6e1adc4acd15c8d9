#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace redahd::cop {

enum class CopKind { Tsp, Cvrp, Bpp, Obpp, Kp, Mkp };

inline constexpr std::array<CopKind, 6> kAllKinds = {
    CopKind::Tsp, CopKind::Cvrp, CopKind::Bpp,
    CopKind::Obpp, CopKind::Kp, CopKind::Mkp};

std::string_view to_string(CopKind kind);
// Accepts the lowercase names produced by to_string ("tsp", "cvrp", ...).
CopKind parse_kind(std::string_view name);

// TSP, CVRP, BPP and OBPP are minimised; their objectives are negated so that
// larger is always better.
bool is_minimization(CopKind kind);

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

Matrix euclidean_distances(const std::vector<Point>& coords);

struct TspInstance {
  std::vector<Point> coords;
  Matrix distances;  // N x N
};

// Node 0 is the depot; customers are 1..N.
struct CvrpInstance {
  std::vector<Point> coords;   // N+1
  Matrix distances;            // (N+1) x (N+1)
  std::vector<double> demands; // N+1, demands[0] == 0
  double capacity = 0.0;
};

struct BppInstance {
  std::vector<double> item_sizes;
  double capacity = 0.0;
};

struct ObppInstance {
  std::vector<double> item_stream;  // arrival order
  double capacity = 0.0;
};

struct KpInstance {
  std::vector<double> weights;
  std::vector<double> values;
  double capacity = 0.0;
};

// M knapsacks; weights(i, j) is the weight of item j when placed in knapsack i,
// constraints[i] is the capacity of knapsack i.
struct MkpInstance {
  std::vector<double> values;       // N
  Matrix weights;                   // M x N
  std::vector<double> constraints;  // M
};

using Instance = std::variant<TspInstance, CvrpInstance, BppInstance,
                              ObppInstance, KpInstance, MkpInstance>;

CopKind kind_of(const Instance& instance);
// N as declared by the instance (nodes, customers, items).
std::size_t size_of(const Instance& instance);

struct TspSolution {
  std::vector<int> tour;
};

struct CvrpSolution {
  std::vector<std::vector<int>> routes;  // customer ids in 1..N
};

struct BppSolution {
  std::vector<std::vector<int>> bins;
};

// assignment[i] is the bin chosen for the i-th arriving item; bins are
// numbered in order of opening.
struct ObppSolution {
  std::vector<int> assignment;
};

struct KpSolution {
  std::vector<int> items;
};

struct MkpSolution {
  std::vector<std::vector<int>> knapsacks;  // one item list per knapsack
};

using Solution = std::variant<TspSolution, CvrpSolution, BppSolution,
                              ObppSolution, KpSolution, MkpSolution>;

CopKind kind_of(const Solution& solution);

struct DatasetMetadata {
  std::string source;          // "generator" or a file name
  std::string params_json;     // canonical JSON of generator params, "{}" if none
  unsigned long long seed = 0;
};

struct Dataset {
  CopKind kind = CopKind::Tsp;
  std::vector<Instance> instances;
  DatasetMetadata metadata;
};

// Throws ContractError when the dataset is empty or mixes kinds.
void check_dataset(const Dataset& dataset);

}  // namespace redahd::cop
