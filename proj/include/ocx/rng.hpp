#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace ocx::rng {

// 53-bit uniform in [0, 1).
inline double uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform(gen);
}

// Standard normal via Box-Muller. <random> distributions are not used because
// their output sequences are implementation-defined.
inline double gaussian(std::mt19937_64& gen) {
  const double u1 = 1.0 - uniform(gen);  // (0, 1], keeps the log finite
  const double u2 = uniform(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t v = gen();
  while (v >= limit) v = gen();
  return v % n;
}

// Fisher-Yates permutation of 0..n-1.
inline std::vector<std::size_t> permutation(std::size_t n, std::mt19937_64& gen) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(below(gen, i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace ocx::rng
