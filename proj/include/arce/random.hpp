// SPDX-License-Identifier: Apache-2.0
//
// arce - angle- and range-constrained localization for multistatic radar
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "arce/types.hpp"

namespace arce {

/// splitmix64 mixing step. Used to derive statistically independent child
/// seeds from a base seed plus structured indices, so that every Monte Carlo
/// trial is reproducible in isolation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Child seed for (sweep point, trial) under a scenario base seed. The chain
/// of splitmix64 steps keeps distinct index pairs decorrelated.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t sweep_index,
                                 std::uint64_t trial_index) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ splitmix64(sweep_index + 0x632be59bd9b4e019ull));
  s = splitmix64(s ^ splitmix64(trial_index + 0x9e6c63d0876a9a47ull));
  return s;
}

/// Standard normal sampler with a fixed draw discipline: every call consumes
/// exactly two engine outputs (Box-Muller, cosine branch only). Sequences
/// that share a seed therefore agree draw-for-draw on any common prefix,
/// which lets paired experiments reuse identical noise on shared links.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    // u1 in (0, 1], u2 in [0, 1); u1 > 0 keeps the log finite.
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    constexpr double two_pi = 6.283185307179586;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace arce
