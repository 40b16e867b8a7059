#pragma once

// Small hand-rolled generators for property tests. Every generator takes the
// engine explicitly so a failing case can be replayed from its seed.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "orlicz/field.hpp"
#include "orlicz/young.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int integer(Rng& rng, int lo, int hi) {  // inclusive
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline std::vector<orlicz::YoungFunction> youngs() {
  using orlicz::YoungFunction;
  return {YoungFunction::power(2.0), YoungFunction::power(3.5), YoungFunction::power_sum(2.0, 4.0),
          YoungFunction::power_sum(1.5, 3.0), YoungFunction::power_log(2.0)};
}

inline orlicz::Grid grid_1d(Rng& rng) {
  const int K = integer(rng, 4, 16);
  return orlicz::Grid(1, 1.0 / integer(rng, 2, 16), K);
}

inline orlicz::Grid grid_2d(Rng& rng) {
  const int K = integer(rng, 2, 4);
  return orlicz::Grid(2, 1.0 / integer(rng, 2, 6), K);
}

// Nonnegative field: sparse values, heavy ties, or all positive.
inline orlicz::Field nonnegative(const orlicz::Grid& g, Rng& rng) {
  orlicz::Field u(g);
  const int kind = integer(rng, 0, 2);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (kind == 0) {
      u[i] = uniform(rng) < 0.5 ? 0.0 : uniform(rng, 0.0, 3.0);
    } else if (kind == 1) {
      u[i] = static_cast<double>(integer(rng, 0, 3));
    } else {
      u[i] = uniform(rng, 0.1, 2.0);
    }
  }
  return u;
}

inline orlicz::Field signed_field(const orlicz::Grid& g, Rng& rng) {
  orlicz::Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = uniform(rng, -2.0, 2.0);
  return u;
}

}  // namespace gen
