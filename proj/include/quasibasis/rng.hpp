#pragma once

#include <cstdint>
#include <random>

#include "quasibasis/operator_core.hpp"

namespace qb {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded generator: a std::mt19937_64 whose seed is derived from
/// (seed, stream) with SplitMix64, so independent named streams can be split
/// off a single user seed. Streams are reproducible within one standard
/// library; draws from std::normal_distribution may differ across vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Child generator for a sub-stream; does not advance this generator.
  Rng split(std::uint64_t stream) const { return Rng(seed_, stream_ * 0x9E3779B97F4A7C15ULL + stream + 1); }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Standard complex normal: real and imaginary parts N(0, 1/2).
  Complex complex_normal();

  CMatrix complex_gaussian(int rows, int cols);
  RMatrix real_gaussian(int rows, int cols);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace qb
