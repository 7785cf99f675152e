#pragma once

#include <cstdint>
#include <random>

#include "se3ctl/liegroup.hpp"

namespace se3ctl {

/// Every stochastic routine takes its stream explicitly; no global state.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Standard-normal 6-vector drawn component by component.
inline Vector6 standard_normal6(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector6 v;
  for (int i = 0; i < 6; ++i) v[i] = n(rng);
  return v;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace se3ctl
