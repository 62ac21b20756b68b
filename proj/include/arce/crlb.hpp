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
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arce/geometry.hpp"
#include "arce/types.hpp"

namespace arce {

/// Gradient of the link delay with respect to the target position:
///   link 0:      (2 / c) p / |p|,
///   link i >= 1: (1 / c) (p / |p| + (p - p_ri) / |p - p_ri|).
inline Vec3 delay_gradient(const Vec3& target, const SensorNetwork& network,
                           int index) {
  if (index < 0 || index > network.size()) {
    throw ConfigError("delay_gradient: link index out of range");
  }
  const double r = target.norm();
  if (!(r > 0.0)) {
    throw NumericalError("delay_gradient: target at the transmitter");
  }
  if (index == 0) return (2.0 / kSpeedOfLight) * target / r;
  const Vec3 d = target - network.receiver(index);
  const double rb = d.norm();
  if (!(rb > 0.0)) {
    throw NumericalError("delay_gradient: target at a receiver");
  }
  return (target / r + d / rb) / kSpeedOfLight;
}

struct FisherInfo {
  Mat3 matrix = Mat3::Zero();
};

/// Fisher information of the target position under independent Gaussian
/// delay noise: sum over links of grad grad^T / sigma^2. Symmetric PSD by
/// construction; each added link can only add information.
inline FisherInfo fisher_information(const Vec3& target,
                                     const SensorNetwork& network,
                                     const std::vector<double>& sigmas) {
  if (sigmas.size() != static_cast<std::size_t>(network.size()) + 1) {
    throw ConfigError("fisher_information: sigma table must have one entry per link");
  }
  FisherInfo info;
  for (int i = 0; i <= network.size(); ++i) {
    if (!(sigmas[i] > 0.0)) {
      throw ConfigError("fisher_information: sigmas must be positive");
    }
    const Vec3 grad = delay_gradient(target, network, i);
    info.matrix += (grad * grad.transpose()) / (sigmas[i] * sigmas[i]);
  }
  return info;
}

/// Root trace of the inverse Fisher information: the lower bound on the RMS
/// position error of any unbiased estimator, in meters. Throws when the
/// information matrix is singular, naming the unobservable direction.
inline double rcrlb(const FisherInfo& info) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(info.matrix);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("rcrlb: eigendecomposition failed");
  }
  const Vec3 lam = eig.eigenvalues();
  if (!(lam(0) > 1e-15 * std::max(lam(2), 0.0)) || !(lam(0) > 0.0)) {
    const Vec3 dir = eig.eigenvectors().col(0);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "rcrlb: information matrix singular along [%.3g, %.3g, %.3g]",
                  dir.x(), dir.y(), dir.z());
    throw NumericalError(buf);
  }
  double trace_inv = 0.0;
  for (int j = 0; j < 3; ++j) trace_inv += 1.0 / lam(j);
  return std::sqrt(trace_inv);
}

}  // namespace arce
