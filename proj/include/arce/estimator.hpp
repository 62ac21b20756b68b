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
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "arce/geometry.hpp"
#include "arce/measurement.hpp"
#include "arce/secular.hpp"
#include "arce/types.hpp"

namespace arce {

// ============================================================================
// Candidates
// ============================================================================

/// Where a candidate (or an estimate) came from. The constrained estimator
/// partitions its feasible set into the sphere patch interior to the beam,
/// the four sphere/face arcs, and the four sphere/edge corner points; the
/// two baseline families tag unconstrained and range-only solutions.
enum class CandidateFamily {
  Interior,
  AzimuthFace,
  ElevationFace,
  Corner,
  Unconstrained,
  RangeSphere,
};

inline const char* to_string(CandidateFamily f) {
  switch (f) {
    case CandidateFamily::Interior: return "interior";
    case CandidateFamily::AzimuthFace: return "azimuth_face";
    case CandidateFamily::ElevationFace: return "elevation_face";
    case CandidateFamily::Corner: return "corner";
    case CandidateFamily::Unconstrained: return "unconstrained";
    case CandidateFamily::RangeSphere: return "range_sphere";
  }
  return "unknown";
}

struct Candidate {
  Vec3 position = Vec3::Zero();
  CandidateFamily family = CandidateFamily::Interior;
  /// Face candidates: 1 for the +slope face, 2 for the -slope face.
  /// Corners: the azimuth sign index i of corner (i, j).
  int face = 0;
  /// Corners: the elevation sign index j of corner (i, j).
  int corner = 0;
  double multiplier = 0.0;
  bool has_multiplier = false;
  /// False when the multiplier came from an unresolved ambiguous pair.
  bool certified = true;
  /// Squared residual |H x - g|^2.
  double objective = 0.0;
};

struct Estimate {
  Vec3 position = Vec3::Zero();
  double objective = 0.0;  ///< Squared residual |H x - g|^2.
  CandidateFamily family = CandidateFamily::Interior;
  int face = 0;
  int corner = 0;
  double multiplier = 0.0;
  bool has_multiplier = false;
  bool certified = true;
  int candidate_count = 0;
};

namespace detail {

inline double residual_sq(const LinearModel& model, const Vec3& x) {
  return (model.H * x - model.g).squaredNorm();
}

/// Solution of (C + lambda I) x = y on the radius-r sphere, reconstructed in
/// the eigenbasis as x_j = r zbar_j / (eig_j + lambda). A root sitting on a
/// pole (|eig_j + lambda| below 1e-10 of the problem scale) is handled by
/// the pseudo-inverse rule: the component is zeroed when its coefficient
/// zbar_j is negligible, otherwise the stationary system has no solution
/// there and the candidate is dropped.
inline std::optional<VecX> reconstruct_on_sphere(const SecularProblem& sp,
                                                 double lambda, double r,
                                                 double scale) {
  const int d = static_cast<int>(sp.eigenvalues.size());
  const double pole_tol = 1e-10 * scale;
  const double znorm = sp.zbar.norm();
  VecX coords(d);
  for (int j = 0; j < d; ++j) {
    const double den = sp.eigenvalues(j) + lambda;
    if (std::abs(den) <= pole_tol) {
      if (std::abs(sp.zbar(j)) <= 1e-6 * znorm) {
        coords(j) = 0.0;
      } else {
        return std::nullopt;
      }
    } else {
      coords(j) = r * sp.zbar(j) / den;
    }
  }
  return sp.eigenvectors * coords;
}

}  // namespace detail

/// Stationary points of the residual on the sphere patch strictly inside the
/// beam: x(lambda) = (H^T H + lambda I)^{-1} H^T g over the real roots of
/// |x(lambda)| = b0_bar, kept when they satisfy every beam bound. The bounds
/// are applied with a small inward slack (1e-9 b0_bar) so grazing solutions
/// are not lost to rounding; face candidates cover the boundary proper.
inline std::vector<Candidate> interior_candidates(const LinearModel& model,
                                                  const BeamCone& beam,
                                                  double eps = 1e-9,
                                                  const SecularOptions& opts = {}) {
  const MatX C = model.H.transpose() * model.H;
  const VecX y = model.H.transpose() * model.g;
  const SecularProblem sp = normalize_secular(C, y, model.b0_bar);
  const RootSet roots = secular_roots(sp, eps, opts);
  std::vector<Candidate> out;
  if (roots.zero_coefficients) return out;
  const double tol = 1e-9 * model.b0_bar;
  const double ga = beam.gamma_a();
  const double ge = beam.gamma_e();
  for (const auto& root : roots.roots) {
    const auto coords =
        detail::reconstruct_on_sphere(sp, root.value, model.b0_bar, roots.scale);
    if (!coords) continue;
    const Vec3 x = *coords;
    if (x.x() < -tol) continue;
    if (std::abs(x.y()) > ga * x.x() + tol) continue;
    if (std::abs(x.z()) > ge * x.x() + tol) continue;
    Candidate c;
    c.position = x;
    c.family = CandidateFamily::Interior;
    c.multiplier = root.value;
    c.has_multiplier = true;
    c.certified = root.certified;
    c.objective = detail::residual_sq(model, x);
    out.push_back(c);
  }
  return out;
}

namespace detail {

/// Shared face machinery. A face fixes one coordinate to a slope times x
/// through the 3 x 2 lift T, leaving min |H T q - g|^2 s.t. q^T B q =
/// b0_bar^2 with B = diag(1 + slope^2, 1). Whitening u = B^{1/2} q turns
/// this into the standard sphere-constrained problem; the multiplier is
/// unchanged by the substitution.
inline std::vector<Candidate> face_candidates(
    const LinearModel& model, const Eigen::Matrix<double, 3, 2>& lift,
    double slope_sq, double cross_slope, CandidateFamily family, int face,
    double eps, const SecularOptions& opts) {
  const MatX hf = model.H * lift;
  const Vec2 bh_inv(1.0 / std::sqrt(1.0 + slope_sq), 1.0);
  const MatX a = hf * bh_inv.asDiagonal();
  const MatX C = a.transpose() * a;
  const VecX y = a.transpose() * model.g;
  const SecularProblem sp = normalize_secular(C, y, model.b0_bar);
  const RootSet roots = secular_roots(sp, eps, opts);
  std::vector<Candidate> out;
  if (roots.zero_coefficients) return out;
  const double tol = 1e-9 * model.b0_bar;
  for (const auto& root : roots.roots) {
    const auto u = reconstruct_on_sphere(sp, root.value, model.b0_bar, roots.scale);
    if (!u) continue;
    const Vec2 q = bh_inv.asDiagonal() * (*u);
    if (q(0) < -tol) continue;
    if (std::abs(q(1)) > cross_slope * q(0) + tol) continue;
    Candidate c;
    c.position = lift * q;
    c.family = family;
    c.face = face;
    c.multiplier = root.value;
    c.has_multiplier = true;
    c.certified = root.certified;
    c.objective = residual_sq(model, c.position);
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// Stationary points on the two azimuth faces y = +/- gamma_a x, restricted
/// to the range sphere and to the elevation bounds (with the same inward
/// slack as the interior filter). Face 1 is the +gamma_a side.
inline std::vector<Candidate> azimuth_face_candidates(const LinearModel& model,
                                                      const BeamCone& beam,
                                                      double eps = 1e-9,
                                                      const SecularOptions& opts = {}) {
  const double ga = beam.gamma_a();
  const double ge = beam.gamma_e();
  std::vector<Candidate> out;
  for (int face = 1; face <= 2; ++face) {
    const double sign = face == 1 ? 1.0 : -1.0;
    Eigen::Matrix<double, 3, 2> lift;
    lift << 1.0, 0.0, sign * ga, 0.0, 0.0, 1.0;
    auto c = detail::face_candidates(model, lift, ga * ga, ge,
                                     CandidateFamily::AzimuthFace, face, eps, opts);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

/// Stationary points on the two elevation faces z = +/- gamma_e x, restricted
/// to the range sphere and to the azimuth bounds. Face 1 is the +gamma_e side.
inline std::vector<Candidate> elevation_face_candidates(
    const LinearModel& model, const BeamCone& beam, double eps = 1e-9,
    const SecularOptions& opts = {}) {
  const double ga = beam.gamma_a();
  const double ge = beam.gamma_e();
  std::vector<Candidate> out;
  for (int face = 1; face <= 2; ++face) {
    const double sign = face == 1 ? 1.0 : -1.0;
    Eigen::Matrix<double, 3, 2> lift;
    lift << 1.0, 0.0, 0.0, 1.0, sign * ge, 0.0;
    auto c = detail::face_candidates(model, lift, ge * ge, ga,
                                     CandidateFamily::ElevationFace, face, eps, opts);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

/// The four corner points of the sphere/beam intersection, where both the
/// azimuth and elevation bounds are active:
///   alpha [1, +/-gamma_a, +/-gamma_e],  alpha = b0_bar / sqrt(1 + ga^2 + ge^2),
/// enumerated (i, j) = (1,1), (2,1), (1,2), (2,2) with i the azimuth sign
/// index and j the elevation sign index (1 = +, 2 = -).
inline std::vector<Candidate> corner_candidates(const LinearModel& model,
                                                const BeamCone& beam) {
  const double ga = beam.gamma_a();
  const double ge = beam.gamma_e();
  const double alpha = model.b0_bar / std::sqrt(1.0 + ga * ga + ge * ge);
  std::vector<Candidate> out;
  for (int j = 1; j <= 2; ++j) {
    for (int i = 1; i <= 2; ++i) {
      const double sy = i == 1 ? 1.0 : -1.0;
      const double sz = j == 1 ? 1.0 : -1.0;
      Candidate c;
      c.position = alpha * Vec3(1.0, sy * ga, sz * ge);
      c.family = CandidateFamily::Corner;
      c.face = i;
      c.corner = j;
      c.objective = detail::residual_sq(model, c.position);
      out.push_back(c);
    }
  }
  return out;
}

/// Full candidate enumeration in selection order: interior, azimuth faces
/// (+ then -), elevation faces (+ then -), corners. Near-coincident
/// candidates (within 1e-6 b0_bar) merge, keeping the lower objective in
/// the earlier slot so tie-breaking still follows enumeration order. The
/// structural cap of 6 + 4 + 4 + 4 + 4 + 4 = 26 is enforced.
inline std::vector<Candidate> all_candidates(const LinearModel& model,
                                             const BeamCone& beam,
                                             double eps = 1e-9,
                                             const SecularOptions& opts = {}) {
  std::vector<Candidate> out = interior_candidates(model, beam, eps, opts);
  auto append = [&out](std::vector<Candidate>&& more) {
    for (auto& c : more) out.push_back(std::move(c));
  };
  append(azimuth_face_candidates(model, beam, eps, opts));
  append(elevation_face_candidates(model, beam, eps, opts));
  append(corner_candidates(model, beam));

  const double merge_tol = 1e-6 * model.b0_bar;
  std::vector<Candidate> merged;
  for (const auto& c : out) {
    bool dup = false;
    for (auto& k : merged) {
      if ((c.position - k.position).norm() <= merge_tol) {
        if (c.objective < k.objective) k = c;
        dup = true;
        break;
      }
    }
    if (!dup) merged.push_back(c);
  }
  if (merged.size() > 26) {
    throw NumericalError("all_candidates: candidate cap exceeded");
  }
  return merged;
}

/// Candidate with the smallest objective; ties keep the earliest in
/// enumeration order.
inline const Candidate& select_optimum(const std::vector<Candidate>& candidates) {
  if (candidates.empty()) {
    throw NumericalError("select_optimum: no candidates");
  }
  const Candidate* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.objective < best->objective) best = &c;
  }
  return *best;
}

// ============================================================================
// Estimator
// ============================================================================

namespace detail {

inline void require_localizable(const LinearModel& model) {
  if (model.H.rows() < 3) {
    throw ConfigError("estimator: at least three receivers are required");
  }
  Eigen::JacobiSVD<MatX> svd(model.H);
  const auto& s = svd.singularValues();
  if (!(s(2) > 1e-12 * s(0))) {
    throw NumericalError("estimator: receiver geometry is rank deficient");
  }
  if (!(model.b0_bar > 0.0)) {
    throw NumericalError("estimator: clamped range is not positive");
  }
}

}  // namespace detail

/// Global minimizer of |H x - g|^2 over the sphere |x| = b0_bar intersected
/// with the beam, found by exhausting the stationary candidates of every
/// active-set pattern and picking the best.
inline Estimate arce_solve(const LinearModel& model, const BeamCone& beam,
                           double eps = 1e-9, const SecularOptions& opts = {}) {
  detail::require_localizable(model);
  const std::vector<Candidate> candidates = all_candidates(model, beam, eps, opts);
  const Candidate& best = select_optimum(candidates);
  Estimate e;
  e.position = best.position;
  e.objective = best.objective;
  e.family = best.family;
  e.face = best.face;
  e.corner = best.corner;
  e.multiplier = best.multiplier;
  e.has_multiplier = best.has_multiplier;
  e.certified = best.certified;
  e.candidate_count = static_cast<int>(candidates.size());
  return e;
}

/// Convenience wrapper: build the linearized model from measured delays and
/// solve. The beam is assumed boresight-aligned with +x; rotate inputs into
/// that frame first when the boresight azimuth is nonzero.
inline Estimate arce_estimate(const DelaySet& delays, const SensorNetwork& network,
                              const BeamCone& beam, const RangeBin& bin,
                              double eps = 1e-9, const SecularOptions& opts = {}) {
  const LinearModel model = build_linear_model(delays, network, bin);
  return arce_solve(model, beam, eps, opts);
}

}  // namespace arce
