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
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "arce/types.hpp"

namespace arce {

// ============================================================================
// Sensor network
// ============================================================================

/// A monostatic/bistatic radar network: one transmitter fixed at the origin
/// (colocated with receiver 0) and N additional receive-only sensors.
///
/// Link indexing convention used throughout: link 0 is the monostatic
/// transmitter echo, link i (1 <= i <= N) is the bistatic path through
/// receiver i. Receiver positions are in meters.
class SensorNetwork {
 public:
  explicit SensorNetwork(std::vector<Vec3> receivers)
      : receivers_(std::move(receivers)) {
    if (receivers_.empty()) {
      throw ConfigError("SensorNetwork: at least one receiver is required");
    }
    for (std::size_t i = 0; i < receivers_.size(); ++i) {
      if (!receivers_[i].allFinite()) {
        throw ConfigError("SensorNetwork: receiver " + std::to_string(i + 1) +
                          " has a non-finite coordinate");
      }
      if (receivers_[i].norm() == 0.0) {
        throw ConfigError("SensorNetwork: receiver " + std::to_string(i + 1) +
                          " coincides with the transmitter at the origin");
      }
    }
  }

  /// Number of bistatic receivers N (the monostatic link is implicit).
  int size() const { return static_cast<int>(receivers_.size()); }

  /// Position of receiver i, 1-based to match the link convention.
  const Vec3& receiver(int i) const { return receivers_.at(i - 1); }

  const std::vector<Vec3>& receivers() const { return receivers_; }

  /// N x 3 matrix whose row i-1 is the position of receiver i.
  MatX receiver_matrix() const {
    MatX m(size(), 3);
    for (int i = 0; i < size(); ++i) m.row(i) = receivers_[i].transpose();
    return m;
  }

  /// True when the receiver matrix has full column rank, i.e. the receivers
  /// span all three coordinate axes. Localization needs N >= 3 and this rank
  /// condition; both are checked here rather than at construction so that
  /// smaller networks remain usable for measurement-only work.
  bool full_column_rank(double rel_tol = 1e-12) const {
    if (size() < 3) return false;
    Eigen::JacobiSVD<MatX> svd(receiver_matrix());
    const auto& s = svd.singularValues();
    return s(2) > rel_tol * s(0);
  }

 private:
  std::vector<Vec3> receivers_;
};

// ============================================================================
// Beam cone
// ============================================================================

/// Pyramidal beam validity region of the transmit antenna.
///
/// With the boresight along +x, a point [x, y, z] is inside the beam when
///   x >= 0,  |y| <= x * tan(theta_bar),  |z| <= x * tan(phi_bar),
/// where theta_bar and phi_bar are the azimuth and elevation half-widths.
/// An optional boresight azimuth rotates the whole region about the z axis.
class BeamCone {
 public:
  BeamCone(double theta_bar, double phi_bar, double boresight_azimuth = 0.0)
      : theta_bar_(theta_bar),
        phi_bar_(phi_bar),
        boresight_azimuth_(boresight_azimuth) {
    constexpr double half_pi = 1.5707963267948966;
    if (!(theta_bar >= 0.0 && theta_bar < half_pi)) {
      throw ConfigError("BeamCone: azimuth half-width must lie in [0, pi/2)");
    }
    if (!(phi_bar >= 0.0 && phi_bar < half_pi)) {
      throw ConfigError("BeamCone: elevation half-width must lie in [0, pi/2)");
    }
    if (!std::isfinite(boresight_azimuth)) {
      throw ConfigError("BeamCone: boresight azimuth must be finite");
    }
  }

  double theta_bar() const { return theta_bar_; }
  double phi_bar() const { return phi_bar_; }
  double boresight_azimuth() const { return boresight_azimuth_; }

  /// Azimuth slope tan(theta_bar); finite because theta_bar < pi/2.
  double gamma_a() const { return std::tan(theta_bar_); }

  /// Elevation slope tan(phi_bar); finite because phi_bar < pi/2.
  double gamma_e() const { return std::tan(phi_bar_); }

 private:
  double theta_bar_;
  double phi_bar_;
  double boresight_azimuth_;
};

// ============================================================================
// Coordinates and delays
// ============================================================================

/// Rotation about the z axis by `angle` radians (right-handed).
inline Vec3 rotate_z(const Vec3& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Vec3(c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z());
}

/// Position at the given range with azimuth measured in the x-y plane and
/// elevation measured from the x-y plane, both in radians:
///   [r cos(az) cos(el), r sin(az) cos(el), r sin(el)].
inline Vec3 place_target(double range, double azimuth, double elevation) {
  if (!(range > 0.0)) {
    throw ConfigError("place_target: range must be positive");
  }
  const double ce = std::cos(elevation);
  return Vec3(range * std::cos(azimuth) * ce, range * std::sin(azimuth) * ce,
              range * std::sin(elevation));
}

struct Spherical {
  double range;
  double azimuth;
  double elevation;
};

/// Inverse of place_target. The elevation is measured from the x-y plane,
/// so elevation = atan2(z, hypot(x, y)).
inline Spherical spherical_coordinates(const Vec3& p) {
  Spherical s;
  s.range = p.norm();
  s.azimuth = std::atan2(p.y(), p.x());
  s.elevation = std::atan2(p.z(), std::hypot(p.x(), p.y()));
  return s;
}

/// Beam-frame tangent-plane angles of a point with positive x:
/// azimuth atan2(y, x) and elevation atan2(z, x). These are the angles the
/// pyramidal beam bounds act on, and differ from the spherical elevation.
inline std::pair<double, double> beam_angles(const Vec3& p) {
  return {std::atan2(p.y(), p.x()), std::atan2(p.z(), p.x())};
}

/// Noise-free round-trip delay of link `index` in seconds:
///   index 0:      2 |p| / c
///   index i >= 1: (|p| + |p - p_ri|) / c
inline double bistatic_delay(const Vec3& target, const SensorNetwork& network,
                             int index) {
  if (index < 0 || index > network.size()) {
    throw ConfigError("bistatic_delay: link index out of range");
  }
  const double r = target.norm();
  if (index == 0) return 2.0 * r / kSpeedOfLight;
  const double rb = (target - network.receiver(index)).norm();
  return (r + rb) / kSpeedOfLight;
}

/// True when `p` satisfies every beam bound of `beam` (boresight azimuth
/// applied). Boundary points count as inside.
inline bool in_beam(const Vec3& p, const BeamCone& beam) {
  const Vec3 q = rotate_z(p, -beam.boresight_azimuth());
  if (q.x() < 0.0) return false;
  const double ya = beam.gamma_a() * q.x();
  const double ze = beam.gamma_e() * q.x();
  return q.y() >= -ya && q.y() <= ya && q.z() >= -ze && q.z() <= ze;
}

}  // namespace arce
