#pragma once

#include <cstdint>
#include <random>

#include "blindmix/types.hpp"

namespace blindmix::rng {

/// Counter-based seed splitting: adding trials, users or roles never
/// perturbs previously issued streams.
enum class Role : std::uint64_t {
  Signal = 1,
  Channel = 2,
  Encoder = 3,
  Noise = 4,
  Direction = 5,
  Message = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial,
                                    std::uint64_t user, Role role) {
  return derive_seed(base, trial, user, static_cast<std::uint64_t>(role));
}

/// One CN(0,1) draw: real and imaginary parts i.i.d. N(0, 1/2).
inline Complex complex_gaussian(std::mt19937_64& gen) {
  static constexpr double kStd = 0.70710678118654752440;  // 1/sqrt(2)
  std::normal_distribution<double> n(0.0, kStd);
  const double re = n(gen);
  const double im = n(gen);
  return {re, im};
}

inline CVec complex_gaussian_vector(int n, std::mt19937_64& gen) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = complex_gaussian(gen);
  return v;
}

inline CVec complex_gaussian_vector(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return complex_gaussian_vector(n, gen);
}

}  // namespace blindmix::rng
