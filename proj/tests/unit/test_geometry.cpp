#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mapof/errors.hpp"
#include "mapof/geometry.hpp"

using namespace mapof;

namespace {

constexpr double kTol = 1e-6;

Vec2 reflect_across(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = (b - a) / norm(b - a);
  const Vec2 r = p - a;
  return a + 2.0 * dot(r, d) * d - r;
}

}  // namespace

TEST(Rotate, IdentityAndQuarterTurn) {
  const Vec2 r0 = rotate({1.0, 0.0}, 0.0);
  EXPECT_DOUBLE_EQ(r0.x, 1.0);
  EXPECT_DOUBLE_EQ(r0.y, 0.0);
  const Vec2 r1 = rotate({1.0, 0.0}, std::numbers::pi / 2);
  EXPECT_NEAR(r1.x, 0.0, 1e-15);
  EXPECT_NEAR(r1.y, 1.0, 1e-15);
}

TEST(Rotate, SmallClockwiseAngle) {
  const Vec2 r = rotate({3.0, 0.0}, -0.083141);
  EXPECT_NEAR(r.x, 2.98964, 1e-5);
  EXPECT_NEAR(r.y, -0.24914, 1e-5);
}

TEST(Rotate, PreservesNorm) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 v{u(rng), u(rng)};
    EXPECT_NEAR(norm(rotate(v, u(rng))), norm(v), 1e-12);
  }
}

TEST(BuildPartition, TargetOnPositiveXAxis) {
  const auto pm = build_partition({10.0, 0.0}, {0.0, 0.0}, 3.0, 8.0, 4.5);
  EXPECT_NEAR(pm.mu, 0.0, 1e-12);
  EXPECT_NEAR(pm.p1.x, 0.0, 1e-12);
  EXPECT_NEAR(pm.p1.y, 3.0, 1e-12);
  EXPECT_NEAR(pm.p2.x, 0.0, 1e-12);
  EXPECT_NEAR(pm.p2.y, -3.0, 1e-12);
  EXPECT_NEAR(pm.theta, 0.291457, kTol);
  EXPECT_NEAR(pm.pc1.x, 2.873478, kTol);
  EXPECT_NEAR(pm.pc1.y, 0.862044, kTol);
  EXPECT_NEAR(pm.pc2.x, 2.873478, kTol);
  EXPECT_NEAR(pm.pc2.y, -0.862044, kTol);
}

TEST(BuildPartition, ScenarioOneGeometry) {
  const auto pm = build_partition({18.0, -1.0}, {6.0, 0.0}, 3.0, 8.0, 4.5);
  EXPECT_NEAR(pm.mu, 6.200044, kTol);
  EXPECT_NEAR(pm.theta, std::atan(3.0 / std::sqrt(145.0)), 1e-12);
  EXPECT_NEAR(pm.p1.x, 6.249136, kTol);
  EXPECT_NEAR(pm.p1.y, 2.989637, kTol);
  EXPECT_NEAR(pm.g1.x, 6.373704, kTol);
  EXPECT_NEAR(pm.g1.y, 4.484456, kTol);
}

TEST(BuildPartition, PointsLieOnSecurityCircle) {
  const Vec2 zeta{6.0, 0.0};
  const auto pm = build_partition({18.0, -1.0}, zeta, 3.0, 8.0, 4.5);
  for (const Vec2& p : {pm.p1, pm.p2, pm.pc1, pm.pc2}) EXPECT_NEAR(distance(p, zeta), 3.0, 1e-12);
  EXPECT_NEAR(distance(pm.g1, zeta), 4.5, 1e-12);
  EXPECT_NEAR(distance(pm.g2, zeta), 4.5, 1e-12);
  // pc1 and pc2 sit at +/- theta from the obstacle->target direction.
  const Vec2 axis = pm.target - zeta;
  EXPECT_NEAR(std::atan2(cross(axis, pm.pc1 - zeta), dot(axis, pm.pc1 - zeta)), pm.theta, 1e-12);
  EXPECT_NEAR(std::atan2(cross(axis, pm.pc2 - zeta), dot(axis, pm.pc2 - zeta)), -pm.theta, 1e-12);
}

TEST(BuildPartition, TargetInsideSecurityCircleThrows) {
  EXPECT_THROW(build_partition({6.5, 0.0}, {6.0, 0.0}, 3.0, 8.0, 4.5), GeometryError);
}

TEST(BuildPartition, InconsistentRadiiThrow) {
  EXPECT_THROW(build_partition({18.0, 0.0}, {6.0, 0.0}, 8.0, 3.0, 9.0), GeometryError);
  EXPECT_THROW(build_partition({18.0, 0.0}, {6.0, 0.0}, 3.0, 8.0, 2.0), GeometryError);
}

TEST(SectorContains, InteriorOppositeAndBoundary) {
  EXPECT_TRUE(sector_contains({1.0, 0.1}, {2.0, 1.0}, {2.0, -1.0}, {0.0, 0.0}));
  EXPECT_FALSE(sector_contains({-1.0, 0.0}, {2.0, 1.0}, {2.0, -1.0}, {0.0, 0.0}));
  // (1,0) is on the ray towards (2,0): cross((2,0),(1,0)) = 0, so not strictly inside.
  EXPECT_EQ(cross(Vec2{2.0, 0.0}, Vec2{1.0, 0.0}), 0.0);
  EXPECT_FALSE(sector_contains({1.0, 0.0}, {2.0, 2.0}, {2.0, 0.0}, {0.0, 0.0}));
}

TEST(SectorContains, CollinearRaysThrow) {
  EXPECT_THROW(sector_contains({1.0, 1.0}, {1.0, 0.0}, {2.0, 0.0}, {0.0, 0.0}), DegenerateSectorError);
  EXPECT_THROW(sector_contains({1.0, 1.0}, {1.0, 0.0}, {-1.0, 0.0}, {0.0, 0.0}), DegenerateSectorError);
}

TEST(SectorContains, OrderOfRaysIrrelevant) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    const Vec2 z1{u(rng), u(rng)}, z2{u(rng), u(rng)}, z3{u(rng), u(rng)}, zc{u(rng), u(rng)};
    if (std::abs(cross(z1 - z3, z2 - z3)) < 1e-6) continue;
    EXPECT_EQ(sector_contains(zc, z1, z2, z3), sector_contains(zc, z2, z1, z3));
  }
}

TEST(SectorContains, InvariantUnderScalingAboutApex) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> s(0.01, 100.0);
  for (int i = 0; i < 500; ++i) {
    const Vec2 z1{u(rng), u(rng)}, z2{u(rng), u(rng)}, z3{u(rng), u(rng)}, zc{u(rng), u(rng)};
    if (std::abs(cross(z1 - z3, z2 - z3)) < 1e-6) continue;
    const double k = s(rng);
    const auto scale = [&](const Vec2& p) { return z3 + k * (p - z3); };
    EXPECT_EQ(sector_contains(zc, z1, z2, z3), sector_contains(scale(zc), scale(z1), scale(z2), z3));
  }
}

TEST(ClassifyRegion, InsideSecurityCircleIsRepulsion) {
  const auto pm = build_partition({18.0, -1.0}, {6.0, 0.0}, 3.0, 8.0, 4.5);
  EXPECT_EQ(classify_region({5.0, 0.1}, pm), Mode::Repulsion);
}

TEST(ClassifyRegion, FarAwayIsAttraction) {
  const auto pm = build_partition({18.0, -1.0}, {6.0, 0.0}, 3.0, 8.0, 4.5);
  EXPECT_EQ(classify_region({6.0, 100.0}, pm), Mode::Attraction);
}

TEST(ClassifyRegion, BehindObstacleFollowsSideOfLine) {
  const Vec2 zeta{6.0, 0.0}, eta{18.0, -1.0}, xi{-1.0, 0.5};
  const auto pm = build_partition(eta, zeta, 3.0, 8.0, 4.5);
  // Hand check: xi sits on the same side of the zeta->eta line as p2.
  const double side_xi = cross(eta - zeta, xi - zeta);
  const double side_p2 = cross(eta - zeta, pm.p2 - zeta);
  ASSERT_LT(side_xi, 0.0);
  ASSERT_LT(side_p2, 0.0);
  // Wedge of pc2: strictly between the rays eta->pc2 and eta->zeta.
  ASSERT_GT(cross(pm.pc2 - eta, xi - eta) * cross(pm.pc2 - eta, zeta - eta), 0.0);
  ASSERT_GT(cross(zeta - eta, xi - eta) * cross(zeta - eta, pm.pc2 - eta), 0.0);
  EXPECT_EQ(classify_region(xi, pm), Mode::AvoidB);
  EXPECT_EQ(classify_region(reflect_across(xi, zeta, eta), pm), Mode::AvoidA);
}

TEST(ClassifyRegion, BeyondDetectionRadiusIsAttraction) {
  const auto pm = build_partition({18.0, -1.0}, {6.0, 0.0}, 3.0, 8.0, 4.5);
  EXPECT_EQ(classify_region({-2.5, 0.6}, pm), Mode::Attraction);
}

TEST(ClassifyRegion, MirrorSymmetrySwapsAvoidanceModes) {
  const Vec2 zeta{6.0, 0.0}, eta{18.0, -1.0};
  const auto pm = build_partition(eta, zeta, 3.0, 8.0, 4.5);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  int avoid = 0;
  for (int i = 0; i < 4000; ++i) {
    const Vec2 xi = zeta + Vec2{u(rng), u(rng)};
    const Vec2 mirrored = reflect_across(xi, zeta, eta);
    // Skip points numerically on a sector boundary.
    if (std::abs(cross(eta - zeta, xi - zeta)) < 1e-6) continue;
    if (std::abs(cross(pm.pc1 - eta, xi - eta)) < 1e-6 || std::abs(cross(pm.pc2 - eta, xi - eta)) < 1e-6) continue;
    const Mode a = classify_region(xi, pm);
    const Mode b = classify_region(mirrored, pm);
    switch (a) {
      case Mode::AvoidA: EXPECT_EQ(b, Mode::AvoidB); ++avoid; break;
      case Mode::AvoidB: EXPECT_EQ(b, Mode::AvoidA); ++avoid; break;
      default: EXPECT_EQ(b, a);
    }
  }
  EXPECT_GT(avoid, 50);
}

TEST(ModeFromInt, RejectsOutOfRange) {
  EXPECT_EQ(mode_from_int(3), Mode::AvoidB);
  EXPECT_THROW(mode_from_int(0), std::invalid_argument);
  EXPECT_THROW(mode_from_int(5), std::invalid_argument);
}
