// SPDX-License-Identifier: Apache-2.0
//
// arce - angle- and range-constrained localization for multistatic radar
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "arce/secular.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace {

using arce::ConfigError;
using arce::MatX;
using arce::RootSet;
using arce::SecularOptions;
using arce::SecularProblem;
using arce::VecX;

SecularProblem make_problem(std::initializer_list<double> eigenvalues,
                            std::initializer_list<double> zbar) {
  SecularProblem sp;
  sp.eigenvalues = Eigen::Map<const VecX>(std::data(eigenvalues),
                                          std::ssize(eigenvalues));
  sp.zbar = Eigen::Map<const VecX>(std::data(zbar), std::ssize(zbar));
  sp.eigenvectors = MatX::Identity(sp.eigenvalues.size(), sp.eigenvalues.size());
  return sp;
}

TEST(Secular, IterationBound) {
  // ceil(log2(1e3 / 1e-9)) = 40 halvings from width 1e3 to 1e-9.
  EXPECT_EQ(arce::bisection_iteration_bound(1e3, 1e-9), 40);
  EXPECT_EQ(arce::bisection_iteration_bound(1.0, 1e-9), 30);
  EXPECT_EQ(arce::bisection_iteration_bound(1e-9, 1e-9), 0);
  EXPECT_EQ(arce::bisection_iteration_bound(0.5e-9, 1e-9), 0);
  EXPECT_THROW(arce::bisection_iteration_bound(1.0, 0.0), ConfigError);
}

TEST(Secular, ValueAndDerivative) {
  const SecularProblem sp = make_problem({1.0, 2.0}, {3.0, 0.5});
  // f(0) = 9/1 + 0.25/4 - 1 = 8.0625.
  EXPECT_NEAR(arce::secular_value(sp, 0.0), 8.0625, 1e-12);
  // f'(0) = -2 (9/1 + 0.25/8) = -18.0625.
  EXPECT_NEAR(arce::secular_derivative(sp, 0.0), -18.0625, 1e-12);
}

TEST(Secular, NormalizeRecoversEigenstructure) {
  MatX C(2, 2);
  C << 2.0, 1.0, 1.0, 2.0;
  VecX y(2);
  y << 1.0, 0.0;
  const SecularProblem sp = arce::normalize_secular(C, y, 2.0);
  ASSERT_EQ(sp.eigenvalues.size(), 2);
  EXPECT_NEAR(sp.eigenvalues(0), 1.0, 1e-12);
  EXPECT_NEAR(sp.eigenvalues(1), 3.0, 1e-12);
  const MatX rebuilt = sp.eigenvectors * sp.eigenvalues.asDiagonal() *
                       sp.eigenvectors.transpose();
  EXPECT_LT((rebuilt - C).cwiseAbs().maxCoeff(), 1e-12);
  // Orthonormal rotation preserves the norm of y / r.
  EXPECT_NEAR(sp.zbar.norm(), y.norm() / 2.0, 1e-12);
}

TEST(Secular, NormalizeValidation) {
  MatX C(2, 2);
  C << 2.0, 1.0, 1.0, 2.0;
  VecX y(2);
  y << 1.0, 0.0;
  EXPECT_THROW(arce::normalize_secular(C, y, 0.0), ConfigError);
  EXPECT_THROW(arce::normalize_secular(C, VecX::Ones(3), 1.0), ConfigError);
  MatX asym(2, 2);
  asym << 2.0, 1.0, -1.0, 2.0;
  EXPECT_THROW(arce::normalize_secular(asym, y, 1.0), ConfigError);
}

TEST(Secular, SingleActivePoleHasClosedFormRoots) {
  // With one active term, f = 9 / (x + 1)^2 - 1 vanishes at -4 and 2; both
  // initial brackets collapse onto the roots exactly.
  const SecularProblem sp = make_problem({1.0, 2.0}, {3.0, 0.0});
  const RootSet rs = arce::secular_roots(sp, 1e-9);
  ASSERT_EQ(rs.roots.size(), 2u);
  EXPECT_NEAR(rs.roots[0].value, -4.0, 1e-8);
  EXPECT_NEAR(rs.roots[1].value, 2.0, 1e-8);
  EXPECT_TRUE(rs.roots[0].certified);
  EXPECT_TRUE(rs.roots[1].certified);
  EXPECT_EQ(rs.roots[0].interval, 1);
  EXPECT_EQ(rs.roots[1].interval, 3);
}

TEST(Secular, ZeroCoefficients) {
  const SecularProblem sp = make_problem({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0});
  const RootSet rs = arce::secular_roots(sp, 1e-9);
  EXPECT_TRUE(rs.zero_coefficients);
  EXPECT_TRUE(rs.roots.empty());
}

TEST(Secular, FourRootsWithKnownLocations) {
  // Weights (0.25, 0.75) on poles (1, 3): f crosses zero at -2 on its way
  // down and three more times; locations verified against an independent
  // high-precision solve.
  const SecularProblem sp = make_problem({1.0, 3.0}, {0.5, std::sqrt(0.75)});
  const RootSet rs = arce::secular_roots(sp, 1e-9);
  ASSERT_EQ(rs.roots.size(), 4u);
  EXPECT_NEAR(rs.roots[0].value, -3.879385241571817, 1e-9);
  EXPECT_NEAR(rs.roots[1].value, -2.0, 1e-9);
  EXPECT_NEAR(rs.roots[2].value, -1.6527036446661393, 1e-9);
  EXPECT_NEAR(rs.roots[3].value, -0.46791111376204393, 1e-9);
  EXPECT_EQ(rs.roots[0].interval, 1);
  EXPECT_EQ(rs.roots[1].interval, 2);
  EXPECT_EQ(rs.roots[2].interval, 2);
  EXPECT_EQ(rs.roots[3].interval, 3);
  for (const auto& r : rs.roots) EXPECT_TRUE(r.certified);
}

TEST(Secular, SymmetricInteriorPair) {
  // Equal weights 1/4 on poles symmetric about -2: the interior pair must
  // come back symmetric, and every root matches the independent solve.
  const SecularProblem sp = make_problem({1.0, 3.0}, {0.5, 0.5});
  const RootSet rs = arce::secular_roots(sp, 1e-9);
  ASSERT_EQ(rs.roots.size(), 4u);
  EXPECT_NEAR(rs.roots[0].value, -3.5102239590221098, 1e-9);
  EXPECT_NEAR(rs.roots[1].value, -2.4682131924621356, 1e-9);
  EXPECT_NEAR(rs.roots[2].value, -1.5317868075378644, 1e-9);
  EXPECT_NEAR(rs.roots[3].value, -0.48977604097789021, 1e-9);
  EXPECT_NEAR(rs.roots[1].value + rs.roots[2].value, -4.0, 1e-9);
}

TEST(Secular, ResolvableInteriorPairIsCertified) {
  // A slightly depressed interior minimum (value -1e-4) has two crossings
  // about 1.2e-2 apart, far wider than eps: both must come back certified,
  // with the leading-order spread 2 sqrt(-min / (f''/2)).
  const double z = std::sqrt(0.5 * (1.0 - 1e-4));
  const SecularProblem sp = make_problem({1.0, 3.0}, {z, z});
  const RootSet rs = arce::secular_roots(sp, 1e-9);
  ASSERT_EQ(rs.roots.size(), 4u);
  EXPECT_TRUE(rs.roots[1].certified);
  EXPECT_TRUE(rs.roots[2].certified);
  EXPECT_LT(rs.roots[1].value, -2.0);
  EXPECT_GT(rs.roots[2].value, -2.0);
  const double spread = rs.roots[2].value - rs.roots[1].value;
  EXPECT_NEAR(spread, 2.0 * std::sqrt(1e-4 / 3.0), 1e-3 * spread);
  for (const auto& r : rs.roots) {
    EXPECT_LT(std::abs(arce::secular_value(sp, r.value)), 1e-9);
  }
}

TEST(Secular, CertifiedAbsentInterior) {
  // Raising the weights lifts the interior minimum to +1e-3; the interval
  // is certified root-free and only the outer roots remain.
  const double z = std::sqrt(0.5 * (1.0 + 1e-3));
  const SecularProblem sp = make_problem({1.0, 3.0}, {z, z});
  const RootSet rs = arce::secular_roots(sp, 1e-9);
  ASSERT_EQ(rs.roots.size(), 2u);
  EXPECT_EQ(rs.roots[0].interval, 1);
  EXPECT_EQ(rs.roots[1].interval, 3);
}

TEST(Secular, UnresolvableInteriorEmitsUncertifiedPair) {
  // With a coarse eps of 0.25 and a shallow positive minimum (4e-7 above
  // zero at the bottom of the interior dip), the guard cannot separate a
  // grazing double root from no root: the search must hand back the
  // uncertified pair spanning the unresolved band. Eps acts on the
  // internally rescaled problem (scale = 3 here), so the path is fully
  // deterministic: scaled brackets shrink to [-5/6, -2/3], the probe at
  // -0.75 fails the guard with f' < 0, and the pair {-0.75, -0.625} maps
  // back to {-2.25, -1.875} with half width 0.375.
  const SecularProblem sp = make_problem(
      {1.0, 3.0}, {std::sqrt(0.5 + 3e-7), std::sqrt(0.5 + 1e-7)});
  const RootSet rs = arce::secular_roots(sp, 0.25);
  ASSERT_EQ(rs.roots.size(), 4u);
  EXPECT_TRUE(rs.roots[0].certified);
  EXPECT_FALSE(rs.roots[1].certified);
  EXPECT_FALSE(rs.roots[2].certified);
  EXPECT_TRUE(rs.roots[3].certified);
  EXPECT_NEAR(rs.roots[0].value, -3.7320508948622795, 1e-9);
  EXPECT_NEAR(rs.roots[1].value, -2.25, 1e-12);
  EXPECT_NEAR(rs.roots[2].value, -1.875, 1e-12);
  EXPECT_NEAR(rs.roots[3].value, -0.26794897180441662, 1e-9);
  EXPECT_NEAR(rs.roots[1].half_width, 0.375, 1e-12);
  EXPECT_NEAR(rs.roots[2].half_width, 0.375, 1e-12);
  EXPECT_EQ(rs.roots[0].interval, 1);
  EXPECT_EQ(rs.roots[1].interval, 2);
  EXPECT_EQ(rs.roots[2].interval, 2);
  EXPECT_EQ(rs.roots[3].interval, 3);
}

TEST(Secular, ScaleInvariance) {
  // The multiplier scales with the problem; eps applies to the normalized
  // form, so a 1e12-times larger problem keeps relative accuracy.
  const SecularProblem small = make_problem({1.0, 2.5, 4.0}, {0.7, -1.2, 0.4});
  SecularProblem big = small;
  big.eigenvalues *= 1e12;
  big.zbar *= 1e12;
  const RootSet rs_small = arce::secular_roots(small, 1e-9);
  const RootSet rs_big = arce::secular_roots(big, 1e-9);
  ASSERT_EQ(rs_small.roots.size(), rs_big.roots.size());
  for (std::size_t i = 0; i < rs_small.roots.size(); ++i) {
    EXPECT_NEAR(rs_big.roots[i].value, rs_small.roots[i].value * 1e12,
                1e-6 * std::abs(rs_big.roots[i].value));
    EXPECT_EQ(rs_big.roots[i].interval, rs_small.roots[i].interval);
  }
  EXPECT_NEAR(rs_big.scale, rs_small.scale * 1e12, 1e3);
}

TEST(Secular, InputValidation) {
  EXPECT_THROW(arce::secular_roots(make_problem({2.0, 1.0}, {1.0, 1.0})),
               ConfigError);
  EXPECT_THROW(arce::secular_roots(make_problem({-1.0, 1.0}, {1.0, 1.0})),
               ConfigError);
  EXPECT_THROW(arce::secular_roots(make_problem({1.0, 2.0}, {1.0, 1.0}), 0.0),
               ConfigError);
}

// Random battery cross-checked against the dense-scan oracle. The contract:
// every certified root matches an oracle root and vice versa (uncertified
// pairs stand in for oracle roots inside their band), counts stay within the
// structural cap, interval tags are consistent, and no search exceeds its
// iteration allowance.
void check_against_oracle(const SecularProblem& sp, double eps,
                          const SecularOptions& opts) {
  const RootSet rs = arce::secular_roots(sp, eps, opts);
  const int d = static_cast<int>(sp.eigenvalues.size());
  ASSERT_LE(rs.roots.size(), 2u * d);
  EXPECT_LE(rs.max_iterations, rs.iteration_bound);
  const std::vector<double> expected = oracle::scan_secular_roots(sp);
  const double tol = 10.0 * eps * rs.scale;

  for (std::size_t i = 1; i < rs.roots.size(); ++i) {
    EXPECT_LE(rs.roots[i - 1].value, rs.roots[i].value);
  }
  for (const auto& r : rs.roots) {
    int tag = 1;
    for (int j = 0; j < d; ++j) {
      if (r.value >= -sp.eigenvalues(j)) ++tag;
    }
    EXPECT_EQ(r.interval, tag);
    if (!r.certified) continue;
    double best = std::numeric_limits<double>::infinity();
    for (double o : expected) best = std::min(best, std::abs(o - r.value));
    EXPECT_LE(best, tol) << "certified root " << r.value
                         << " has no oracle counterpart";
  }
  for (double o : expected) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rs.roots) best = std::min(best, std::abs(o - r.value));
    EXPECT_LE(best, tol) << "oracle root " << o << " missed by the solver";
  }
}

SecularProblem random_problem(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(2, 3);
  std::uniform_real_distribution<double> expo(-2.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = dim(rng);
  VecX lam(d), zb(d);
  for (int j = 0; j < d; ++j) {
    lam(j) = unit(rng) < 0.1 ? 0.0 : std::pow(10.0, expo(rng));
    zb(j) = unit(rng) < 0.15 ? 0.0 : gauss(rng) * std::pow(10.0, expo(rng));
  }
  if ((zb.array() == 0.0).all()) zb(0) = 1.0;
  std::sort(lam.data(), lam.data() + d);
  if (unit(rng) < 0.1 && d == 3) lam(1) = lam(2);  // coincident pair
  std::sort(lam.data(), lam.data() + d);
  SecularProblem sp;
  sp.eigenvalues = lam;
  sp.zbar = zb;
  sp.eigenvectors = MatX::Identity(d, d);
  return sp;
}

TEST(Secular, RandomBatteryMatchesDenseScan) {
  std::mt19937_64 rng(20260824);
  for (int k = 0; k < 150; ++k) {
    const SecularProblem sp = random_problem(rng);
    check_against_oracle(sp, 1e-9, SecularOptions{});
  }
}

TEST(Secular, TwoStageMatchesDenseScan) {
  std::mt19937_64 rng(987654321);
  SecularOptions opts;
  opts.two_stage = true;
  for (int k = 0; k < 60; ++k) {
    const SecularProblem sp = random_problem(rng);
    check_against_oracle(sp, 1e-9, opts);
  }
}

TEST(Secular, TwoStageAgreesWithCombined) {
  std::mt19937_64 rng(555);
  SecularOptions two_stage;
  two_stage.two_stage = true;
  for (int k = 0; k < 60; ++k) {
    const SecularProblem sp = random_problem(rng);
    const RootSet a = arce::secular_roots(sp, 1e-9, SecularOptions{});
    const RootSet b = arce::secular_roots(sp, 1e-9, two_stage);
    const double tol = 10.0 * 1e-9 * a.scale;
    for (const auto& ra : a.roots) {
      if (!ra.certified) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& rb : b.roots) {
        best = std::min(best, std::abs(ra.value - rb.value));
      }
      EXPECT_LE(best, tol);
    }
  }
}

TEST(Secular, PolishedRootsAreMachineAccurate) {
  std::mt19937_64 rng(31337);
  for (int k = 0; k < 40; ++k) {
    const SecularProblem sp = random_problem(rng);
    const RootSet rs = arce::secular_roots(sp, 1e-9);
    for (const auto& r : rs.roots) {
      if (!r.certified) continue;
      // In scaled units the residual of a polished root sits near rounding;
      // 1e-11 leaves two orders of headroom over the bisection-only 1e-9.
      const double fval = std::abs(arce::secular_value(sp, r.value));
      const double dval =
          std::abs(arce::secular_derivative(sp, r.value)) * rs.scale;
      EXPECT_LE(fval, 1e-11 * std::max(1.0, dval));
    }
  }
}

}  // namespace
