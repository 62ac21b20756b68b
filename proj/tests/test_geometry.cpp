// SPDX-License-Identifier: Apache-2.0
//
// arce - angle- and range-constrained localization for multistatic radar
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "arce/geometry.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

namespace {

using arce::BeamCone;
using arce::ConfigError;
using arce::SensorNetwork;
using arce::Vec3;

constexpr double kDeg = 0.017453292519943295;

SensorNetwork reference_network() {
  return SensorNetwork({Vec3(916e3, 941e3, 95e3), Vec3(973e3, 541e3, 764e3),
                        Vec3(955e3, 483e3, 191e3), Vec3(936e3, 350e3, 477e3)});
}

TEST(SensorNetwork, BasicAccessors) {
  const SensorNetwork net = reference_network();
  EXPECT_EQ(net.size(), 4);
  EXPECT_EQ(net.receiver(1), Vec3(916e3, 941e3, 95e3));
  EXPECT_EQ(net.receiver(4), Vec3(936e3, 350e3, 477e3));
  const arce::MatX m = net.receiver_matrix();
  ASSERT_EQ(m.rows(), 4);
  ASSERT_EQ(m.cols(), 3);
  EXPECT_EQ(Vec3(m.row(2).transpose()), Vec3(955e3, 483e3, 191e3));
}

TEST(SensorNetwork, RejectsDegenerateInputs) {
  EXPECT_THROW(SensorNetwork({}), ConfigError);
  EXPECT_THROW(SensorNetwork({Vec3::Zero()}), ConfigError);
  EXPECT_THROW(SensorNetwork({Vec3(1, 2, std::nan(""))}), ConfigError);
}

TEST(SensorNetwork, SingleReceiverIsAllowed) {
  const SensorNetwork net({Vec3(2000, 0, 0)});
  EXPECT_EQ(net.size(), 1);
  EXPECT_FALSE(net.full_column_rank());
}

TEST(SensorNetwork, FullColumnRank) {
  EXPECT_TRUE(reference_network().full_column_rank());
  // Coplanar receivers with zero z span only two directions.
  const SensorNetwork flat(
      {Vec3(1e3, 0, 0), Vec3(0, 1e3, 0), Vec3(1e3, 1e3, 0)});
  EXPECT_FALSE(flat.full_column_rank());
}

TEST(BeamCone, SlopesMatchTangents) {
  const BeamCone beam(7.0 * kDeg, 5.0 * kDeg);
  EXPECT_NEAR(beam.gamma_a(), 0.12278456090290459, 1e-15);
  EXPECT_NEAR(beam.gamma_e(), 0.08748866352592401, 1e-15);
  EXPECT_EQ(beam.boresight_azimuth(), 0.0);
  const BeamCone pointed(7.0 * kDeg, 5.0 * kDeg, 1.25);
  EXPECT_EQ(pointed.boresight_azimuth(), 1.25);
}

TEST(BeamCone, RejectsOutOfRangeHalfWidths) {
  EXPECT_THROW(BeamCone(-0.01, 0.1), ConfigError);
  EXPECT_THROW(BeamCone(0.1, -0.01), ConfigError);
  EXPECT_THROW(BeamCone(1.5707963267948966, 0.1), ConfigError);
  EXPECT_THROW(BeamCone(0.1, 1.6), ConfigError);
  EXPECT_NO_THROW(BeamCone(0.0, 0.0));
}

TEST(Geometry, RotateZ) {
  const Vec3 v = arce::rotate_z(Vec3(1, 0, 2), 90.0 * kDeg);
  EXPECT_NEAR(v.x(), 0.0, 1e-15);
  EXPECT_NEAR(v.y(), 1.0, 1e-15);
  EXPECT_EQ(v.z(), 2.0);
  const Vec3 w = arce::rotate_z(arce::rotate_z(Vec3(3, -4, 5), 0.7), -0.7);
  EXPECT_NEAR(w.x(), 3.0, 1e-12);
  EXPECT_NEAR(w.y(), -4.0, 1e-12);
}

TEST(Geometry, PlaceTarget) {
  const Vec3 on_axis = arce::place_target(20e3, 0.0, 0.0);
  EXPECT_EQ(on_axis, Vec3(20e3, 0, 0));

  const Vec3 t4 = arce::place_target(20e3, 4.0 * kDeg, 0.0);
  EXPECT_NEAR(t4.x(), 19951.281005196484, 1e-8);
  EXPECT_NEAR(t4.y(), 1395.129474882506, 1e-8);
  EXPECT_EQ(t4.z(), 0.0);

  const Vec3 edge = arce::place_target(20e3, 6.9 * kDeg, 4.9 * kDeg);
  EXPECT_NEAR(edge.x(), 19782.582157807807, 1e-8);
  EXPECT_NEAR(edge.y(), 2393.955485442913, 1e-8);
  EXPECT_NEAR(edge.z(), 1708.3384627473495, 1e-8);

  EXPECT_THROW(arce::place_target(0.0, 0.0, 0.0), ConfigError);
  EXPECT_THROW(arce::place_target(-5.0, 0.0, 0.0), ConfigError);
}

TEST(Geometry, SphericalRoundTrip) {
  const double ranges[] = {1.0, 20e3, 5e5};
  const double azimuths[] = {-0.12, 0.0, 0.9};
  const double elevations[] = {-0.08, 0.0, 0.6};
  for (double r : ranges) {
    for (double az : azimuths) {
      for (double el : elevations) {
        const Vec3 p = arce::place_target(r, az, el);
        const arce::Spherical s = arce::spherical_coordinates(p);
        EXPECT_NEAR(s.range, r, 1e-9 * r);
        EXPECT_NEAR(s.azimuth, az, 1e-12);
        EXPECT_NEAR(s.elevation, el, 1e-12);
      }
    }
  }
}

TEST(Geometry, BeamAnglesDifferFromSpherical) {
  // The pyramidal bounds act on atan2(z, x), not on the spherical
  // elevation; at the beam edge the two differ by several hundredths of a
  // degree.
  const Vec3 edge = arce::place_target(20e3, 6.9 * kDeg, 4.9 * kDeg);
  const auto [az, el] = arce::beam_angles(edge);
  EXPECT_NEAR(az / kDeg, 6.9, 1e-10);
  EXPECT_NEAR(el / kDeg, 4.935571987700405, 1e-9);
}

TEST(Geometry, BistaticDelay) {
  const SensorNetwork net = reference_network();
  const Vec3 target(20e3, 0, 0);
  EXPECT_NEAR(arce::bistatic_delay(target, net, 0), 1.3342563807926082e-4,
              1e-19);
  EXPECT_NEAR(arce::bistatic_delay(target, net, 1), 4.412429582061629e-3,
              1e-17);
  EXPECT_THROW(arce::bistatic_delay(target, net, -1), ConfigError);
  EXPECT_THROW(arce::bistatic_delay(target, net, 5), ConfigError);
}

TEST(Geometry, InBeam) {
  const BeamCone beam(7.0 * kDeg, 5.0 * kDeg);
  EXPECT_TRUE(arce::in_beam(Vec3(20e3, 0, 0), beam));
  EXPECT_TRUE(arce::in_beam(arce::place_target(20e3, 6.9 * kDeg, 4.9 * kDeg), beam));
  EXPECT_FALSE(arce::in_beam(Vec3(-1.0, 0, 0), beam));
  EXPECT_FALSE(arce::in_beam(Vec3(20e3, 20e3 * 0.13, 0), beam));
  EXPECT_FALSE(arce::in_beam(Vec3(20e3, 0, 20e3 * 0.09), beam));
  // Boundary points belong to the beam.
  const double ga = beam.gamma_a();
  EXPECT_TRUE(arce::in_beam(Vec3(1e4, 1e4 * ga, 0), beam));
  EXPECT_TRUE(arce::in_beam(Vec3::Zero(), beam));
}

TEST(Geometry, InBeamWithBoresight) {
  const double psi = 40.0 * kDeg;
  const BeamCone beam(7.0 * kDeg, 5.0 * kDeg, psi);
  const Vec3 target = arce::rotate_z(Vec3(20e3, 0, 0), psi);
  EXPECT_TRUE(arce::in_beam(target, beam));
  EXPECT_FALSE(arce::in_beam(Vec3(20e3, 0, 0), beam));
}

}  // namespace
