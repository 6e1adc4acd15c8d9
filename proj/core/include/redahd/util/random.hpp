#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace redahd::util {

// mt19937_64 plus distribution transforms written out by hand, so that draws
// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform01();
  // (0, 1), never 0.
  double uniform_open01();
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi], rejection-sampled.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double weibull(double shape, double scale);

  std::string serialize() const;
  void deserialize(const std::string& state);

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace redahd::util
