#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "armimo/types.hpp"

namespace armimo {

// Random source handed explicitly to every sampling routine. Parallel Monte Carlo
// derives one stream per (master_seed, trial) so results do not depend on how
// trials are spread over threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t master_seed, std::uint64_t index);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  // CN(0, variance): real and imaginary parts i.i.d. N(0, variance / 2).
  Complex complex_normal(double variance = 1.0);
  void fill_complex_normal(std::span<Complex> out, double variance = 1.0);
  CVector complex_normal_vector(Eigen::Index n, double variance = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace armimo
