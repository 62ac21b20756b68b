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
#include <vector>

#include <Eigen/Dense>

#include "arce/estimator.hpp"
#include "arce/measurement.hpp"
#include "arce/secular.hpp"
#include "arce/types.hpp"

namespace arce {

/// Unconstrained least squares baseline: x = (H^T H)^{-1} H^T g. Ignores
/// both the range sphere and the beam.
inline Estimate u_tdoa_estimate(const LinearModel& model) {
  detail::require_localizable(model);
  const MatX C = model.H.transpose() * model.H;
  const VecX y = model.H.transpose() * model.g;
  Estimate e;
  e.position = Eigen::LDLT<MatX>(C).solve(y);
  e.objective = detail::residual_sq(model, e.position);
  e.family = CandidateFamily::Unconstrained;
  e.candidate_count = 1;
  return e;
}

/// Range-constrained baseline: the global minimizer of |H x - g|^2 on the
/// sphere |x| = b0_bar with no beam bounds. Uses the same secular root
/// machinery as the constrained estimator but keeps every reconstructed
/// stationary point. When H^T g vanishes exactly the residual on the sphere
/// depends only on x^T H^T H x, minimized along the smallest-eigenvalue
/// direction; the representative with its first nonzero component positive
/// is returned.
inline Estimate roce_estimate(const LinearModel& model, double eps = 1e-9,
                              const SecularOptions& opts = {}) {
  detail::require_localizable(model);
  const MatX C = model.H.transpose() * model.H;
  const VecX y = model.H.transpose() * model.g;
  const SecularProblem sp = normalize_secular(C, y, model.b0_bar);
  const RootSet roots = secular_roots(sp, eps, opts);

  Estimate e;
  e.family = CandidateFamily::RangeSphere;
  if (roots.zero_coefficients) {
    Vec3 u = sp.eigenvectors.col(0);
    for (int j = 0; j < 3; ++j) {
      if (u(j) != 0.0) {
        if (u(j) < 0.0) u = -u;
        break;
      }
    }
    e.position = model.b0_bar * u;
    e.objective = detail::residual_sq(model, e.position);
    e.candidate_count = 1;
    return e;
  }

  bool have = false;
  for (const auto& root : roots.roots) {
    const auto coords =
        detail::reconstruct_on_sphere(sp, root.value, model.b0_bar, roots.scale);
    if (!coords) continue;
    const Vec3 x = *coords;
    const double obj = detail::residual_sq(model, x);
    ++e.candidate_count;
    if (!have || obj < e.objective) {
      have = true;
      e.position = x;
      e.objective = obj;
      e.multiplier = root.value;
      e.has_multiplier = true;
      e.certified = root.certified;
    }
  }
  if (!have) {
    throw NumericalError("roce_estimate: no reconstructible stationary point");
  }
  return e;
}

}  // namespace arce
