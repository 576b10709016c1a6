#include "armimo/rng.hpp"

#include <cmath>

namespace armimo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

Complex Rng::complex_normal(double variance) {
  const double scale = std::sqrt(0.5 * variance);
  const double re = normal();
  const double im = normal();
  return {scale * re, scale * im};
}

void Rng::fill_complex_normal(std::span<Complex> out, double variance) {
  for (auto& z : out) z = complex_normal(variance);
}

CVector Rng::complex_normal_vector(Eigen::Index n, double variance) {
  CVector v(n);
  fill_complex_normal(as_span(v), variance);
  return v;
}

}  // namespace armimo
