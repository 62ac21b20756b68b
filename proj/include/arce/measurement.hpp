// SPDX-License-Identifier: Apache-2.0
//
// arce - angle- and range-constrained localization for multistatic radar
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "arce/geometry.hpp"
#include "arce/random.hpp"
#include "arce/types.hpp"

namespace arce {

// ============================================================================
// Noise model
// ============================================================================

/// Delay standard deviation of a link with (two-sided) signal bandwidth
/// `bandwidth` [Hz] and post-processing SNR `snr` (linear):
///   sigma = 1 / (bandwidth * sqrt(2 * snr))   [s].
inline double sigma_from_snr(double bandwidth, double snr) {
  if (!(bandwidth > 0.0)) {
    throw ConfigError("sigma_from_snr: bandwidth must be positive");
  }
  if (!(snr > 0.0)) {
    throw ConfigError("sigma_from_snr: SNR must be positive");
  }
  return 1.0 / (bandwidth * std::sqrt(2.0 * snr));
}

/// Per-link delay noise. sigma[i] is the standard deviation of link i in
/// seconds; entry 0 is the monostatic link. A zero entry models a noise-free
/// link, which simulation supports for exactness checks.
struct NoiseModel {
  double bandwidth = 0.0;
  std::vector<double> sigma;
};

/// Free-space SNR budget anchored at a nominal point. The SNR of link i for
/// a target p follows an inverse fourth-power range law split over the two
/// legs of the bistatic path:
///   SNR_i = (snr0_ref / loss[i]) * (|q0|^2 / |p|^2) * (|q0|^2 / |p - p_ri|^2)
/// with q0 the nominal point, loss in linear units, and p_r0 = 0 so that the
/// monostatic link uses |p| for both legs.
struct SnrScenario {
  double snr0_ref = 1.0;     ///< Monostatic SNR at the nominal point, linear.
  Vec3 nominal_point;        ///< q0 [m].
  std::vector<double> loss;  ///< Linear per-link losses, size N + 1.
};

inline double link_snr(const SnrScenario& snr, const Vec3& target,
                       const SensorNetwork& network, int index) {
  if (index < 0 || index > network.size()) {
    throw ConfigError("link_snr: link index out of range");
  }
  if (snr.loss.size() != static_cast<std::size_t>(network.size()) + 1) {
    throw ConfigError("link_snr: loss table must have one entry per link");
  }
  if (!(snr.loss[index] > 0.0)) {
    throw ConfigError("link_snr: losses must be positive");
  }
  const double q0_sq = snr.nominal_point.squaredNorm();
  const double r_sq = target.squaredNorm();
  if (!(q0_sq > 0.0) || !(r_sq > 0.0)) {
    throw ConfigError("link_snr: nominal point and target must be nonzero");
  }
  const double rb_sq = index == 0
                           ? r_sq
                           : (target - network.receiver(index)).squaredNorm();
  if (!(rb_sq > 0.0)) {
    throw ConfigError("link_snr: target coincides with a receiver");
  }
  return (snr.snr0_ref / snr.loss[index]) * (q0_sq / r_sq) * (q0_sq / rb_sq);
}

/// NoiseModel with sigma[i] derived from the SNR budget at `target`.
inline NoiseModel noise_for_target(const SnrScenario& snr, const Vec3& target,
                                   const SensorNetwork& network,
                                   double bandwidth) {
  NoiseModel noise;
  noise.bandwidth = bandwidth;
  noise.sigma.resize(network.size() + 1);
  for (int i = 0; i <= network.size(); ++i) {
    noise.sigma[i] = sigma_from_snr(bandwidth, link_snr(snr, target, network, i));
  }
  return noise;
}

// ============================================================================
// Delay simulation
// ============================================================================

/// One simulated observation: measured delays and the sigmas they were drawn
/// with, both indexed by link (size N + 1).
struct DelaySet {
  std::vector<double> delays;
  std::vector<double> sigmas;
};

/// Noise-free delays for every link.
inline DelaySet exact_delays(const Vec3& target, const SensorNetwork& network) {
  DelaySet set;
  const int n = network.size();
  set.delays.resize(n + 1);
  set.sigmas.assign(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    set.delays[i] = bistatic_delay(target, network, i);
  }
  return set;
}

/// Delays with independent zero-mean Gaussian noise per link. Draws happen
/// in link order 0..N, one per link, so extending a network by appending
/// receivers leaves the noise on the shared prefix unchanged for a given
/// seed.
inline DelaySet simulate_delays(const Vec3& target, const SensorNetwork& network,
                                const NoiseModel& noise, std::uint64_t seed) {
  const int n = network.size();
  if (noise.sigma.size() != static_cast<std::size_t>(n) + 1) {
    throw ConfigError("simulate_delays: sigma table must have one entry per link");
  }
  DelaySet set = exact_delays(target, network);
  GaussianSampler gauss(seed);
  for (int i = 0; i <= n; ++i) {
    const double s = noise.sigma[i];
    if (!(s >= 0.0)) {
      throw ConfigError("simulate_delays: sigmas must be nonnegative");
    }
    set.sigmas[i] = s;
    set.delays[i] += s * gauss();
  }
  return set;
}

// ============================================================================
// Linearized model
// ============================================================================

/// Closed interval of admissible monostatic ranges.
struct RangeBin {
  double lower = 0.0;
  double upper = 0.0;
};

/// Default bin centered on the measured monostatic range, with half-width
/// c / (4 * bandwidth): half a range resolution cell each side. The lower
/// edge clamps at zero since ranges are nonnegative.
inline RangeBin default_range_bin(double b0, double bandwidth) {
  if (!(bandwidth > 0.0)) {
    throw ConfigError("default_range_bin: bandwidth must be positive");
  }
  const double half = kSpeedOfLight / (4.0 * bandwidth);
  RangeBin bin;
  bin.lower = std::max(0.0, b0 - half);
  bin.upper = b0 + half;
  if (!(bin.upper > 0.0)) {
    throw NumericalError("default_range_bin: measured range is too negative");
  }
  return bin;
}

/// Clamp of the measured monostatic range into the bin.
inline double project_range(double b0, const RangeBin& bin) {
  if (!(bin.lower >= 0.0) || !(bin.upper >= bin.lower)) {
    throw ConfigError("project_range: bin must satisfy 0 <= lower <= upper");
  }
  return std::clamp(b0, bin.lower, bin.upper);
}

/// Linearized localization model built from measured delays.
///
/// With b0 = c tau_0 / 2 and b_i = c tau_i - b0, squaring the bistatic range
/// equations and eliminating |p|^2 gives N linear equations H p = g with
///   H row i = -2 p_ri^T,
///   g_i     = b_i^2 - b0^2 - |p_ri|^2,
/// coupled to the range constraint |p| = b0. The clamped range b0_bar
/// replaces b0 wherever the constraint radius is needed downstream.
struct LinearModel {
  MatX H;         ///< N x 3.
  VecX g;         ///< N.
  double b0;      ///< Measured monostatic range [m].
  double b0_bar;  ///< b0 clamped into the bin [m].
  RangeBin bin;
};

inline LinearModel build_linear_model(const DelaySet& delays,
                                      const SensorNetwork& network,
                                      const RangeBin& bin) {
  const int n = network.size();
  if (delays.delays.size() != static_cast<std::size_t>(n) + 1) {
    throw ConfigError("build_linear_model: delay count must match link count");
  }
  LinearModel model;
  model.b0 = kSpeedOfLight * delays.delays[0] / 2.0;
  model.b0_bar = project_range(model.b0, bin);
  model.bin = bin;
  model.H.resize(n, 3);
  model.g.resize(n);
  for (int i = 1; i <= n; ++i) {
    const Vec3& pr = network.receiver(i);
    const double bi = kSpeedOfLight * delays.delays[i] - model.b0;
    model.H.row(i - 1) = -2.0 * pr.transpose();
    model.g(i - 1) = bi * bi - model.b0 * model.b0 - pr.squaredNorm();
  }
  return model;
}

}  // namespace arce
