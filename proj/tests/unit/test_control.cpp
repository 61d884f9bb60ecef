#include <gtest/gtest.h>

#include "mapof/control.hpp"
#include "mapof/errors.hpp"

using namespace mapof;

namespace {

const Gains kGains{3.77, 1.90, 20.0, 4.37};
const Vec2 kTarget{18.0, -1.0};
const Vec2 kObstacle{6.0, 0.0};

PartitionMap scenario_map() { return build_partition(kTarget, kObstacle, 3.0, 8.0, 4.5); }

}  // namespace

TEST(Force, AttractionVanishesAtTarget) {
  const Vec2 f = force(Mode::Attraction, kTarget, kTarget, nullptr, kGains);
  EXPECT_EQ(f.x, 0.0);
  EXPECT_EQ(f.y, 0.0);
}

TEST(Force, AttractionFromScenarioStart) {
  const Vec2 f = force(Mode::Attraction, {-5.0, 2.0}, kTarget, nullptr, kGains);
  EXPECT_NEAR(f.x, 86.71, 1e-9);
  EXPECT_NEAR(f.y, -11.31, 1e-9);
}

TEST(Force, RepulsionPointsAwayFromObstacle) {
  const auto pm = scenario_map();
  const Vec2 xi{5.0, 0.0};
  const Vec2 f = force(Mode::Repulsion, xi, pm, kGains);
  EXPECT_NEAR(f.x, -20.0, 1e-12);
  EXPECT_NEAR(f.y, 0.0, 1e-12);
  EXPECT_NEAR(dot(xi - kObstacle, f), 20.0, 1e-12);
}

TEST(Force, AvoidanceModesPullTowardsVirtualTargets) {
  const auto pm = scenario_map();
  const Vec2 xi{0.0, 0.0};
  const Vec2 f2 = force(Mode::AvoidA, xi, pm, kGains);
  const Vec2 f3 = force(Mode::AvoidB, xi, pm, kGains);
  EXPECT_NEAR(f2.x, 1.90 * pm.g1.x, 1e-12);
  EXPECT_NEAR(f2.y, 1.90 * pm.g1.y, 1e-12);
  EXPECT_NEAR(f3.x, 1.90 * pm.g2.x, 1e-12);
  EXPECT_NEAR(f3.y, 1.90 * pm.g2.y, 1e-12);
}

TEST(Force, MissingPartitionThrows) {
  EXPECT_THROW(force(Mode::AvoidA, {0.0, 0.0}, kTarget, nullptr, kGains), MissingPartitionError);
  EXPECT_THROW(force(Mode::Repulsion, {0.0, 0.0}, kTarget, nullptr, kGains), MissingPartitionError);
}

TEST(ControlInput, EquilibriumIsZero) {
  const Vec2 u = control_input(Mode::Attraction, kTarget, {0.0, 0.0}, kTarget, nullptr, kGains);
  EXPECT_EQ(u.x, 0.0);
  EXPECT_EQ(u.y, 0.0);
}

TEST(ControlInput, DampingSubtractsVelocity) {
  const Vec2 u = control_input(Mode::Attraction, {-5.0, 2.0}, {1.0, 0.0}, kTarget, nullptr, kGains);
  EXPECT_NEAR(u.x, 82.34, 1e-9);
  EXPECT_NEAR(u.y, -11.31, 1e-9);
  const Vec2 u4 = control_input(Mode::Repulsion, {5.0, 0.0}, {0.0, -2.0}, scenario_map(), kGains);
  EXPECT_NEAR(u4.x, -20.0, 1e-12);
  EXPECT_NEAR(u4.y, 8.74, 1e-12);
}

TEST(Supervisor, RejectsBadDwellTimes) {
  EXPECT_THROW(SwitchSupervisor(DwellPolicy::Theorem, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(SwitchSupervisor(DwellPolicy::Theorem, -1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(SwitchSupervisor(DwellPolicy::Theorem, 1.0, 1.0), std::invalid_argument);
}

TEST(Supervisor, FirstSampleIsNotASwitch) {
  SwitchSupervisor sup(DwellPolicy::Corollary, 1.6, 6.25);
  EXPECT_EQ(sup.update(Mode::AvoidA, 0.0), Mode::AvoidA);
  EXPECT_TRUE(sup.events().empty());
}

TEST(Supervisor, HoldsStableModeUntilDwellElapsed) {
  SwitchSupervisor sup(DwellPolicy::Corollary, 1.6, 6.25);
  sup.update(Mode::Attraction, 0.0);
  EXPECT_EQ(sup.update(Mode::AvoidA, 0.1), Mode::AvoidA);  // no prior switch, free to move
  EXPECT_EQ(sup.update(Mode::Attraction, 0.2), Mode::AvoidA);
  EXPECT_EQ(sup.update(Mode::Attraction, 1.7), Mode::AvoidA);  // 1.6 s since the switch, not more
  EXPECT_EQ(sup.update(Mode::Attraction, 1.701), Mode::Attraction);
  ASSERT_EQ(sup.events().size(), 2u);
  EXPECT_DOUBLE_EQ(sup.events()[1].t, 1.701);
}

TEST(Supervisor, ScenarioOneTiming) {
  // Region says avoidance from 0.33 s and attraction again from 1.71 s.
  SwitchSupervisor sup(DwellPolicy::Theorem, 1.60, 6.25);
  double switched_back = -1.0;
  for (int n = 0; n <= 3000; ++n) {
    const double t = n * 1e-3;
    const Mode region = (t >= 0.33 && t < 1.71) ? Mode::AvoidA : Mode::Attraction;
    const Mode m = sup.update(region, t);
    if (t > 1.0 && m == Mode::Attraction && switched_back < 0.0) switched_back = t;
  }
  ASSERT_EQ(sup.events().size(), 2u);
  EXPECT_NEAR(sup.events()[0].t, 0.33, 1e-9);
  EXPECT_NEAR(switched_back, 1.93, 1.5e-3);
}

TEST(Supervisor, CorollaryEntersRepulsionImmediately) {
  SwitchSupervisor sup(DwellPolicy::Corollary, 1.6, 6.25);
  sup.update(Mode::Attraction, 0.0);
  sup.update(Mode::AvoidA, 0.1);
  EXPECT_EQ(sup.update(Mode::Repulsion, 0.2), Mode::Repulsion);
}

TEST(Supervisor, TheoremGatesRepulsionEntry) {
  SwitchSupervisor sup(DwellPolicy::Theorem, 1.6, 6.25);
  sup.update(Mode::Attraction, 0.0);
  sup.update(Mode::AvoidA, 0.1);
  EXPECT_EQ(sup.update(Mode::Repulsion, 0.2), Mode::AvoidA);
  EXPECT_EQ(sup.update(Mode::Repulsion, 1.701), Mode::Repulsion);
}

TEST(Supervisor, LeavesRepulsionAsSoonAsRegionIsStable) {
  SwitchSupervisor sup(DwellPolicy::Corollary, 1.6, 6.25);
  sup.update(Mode::Repulsion, 0.0);
  EXPECT_EQ(sup.update(Mode::AvoidB, 0.001), Mode::AvoidB);
}

TEST(Supervisor, HoldsTD2AfterRepulsion) {
  SwitchSupervisor sup(DwellPolicy::Corollary, 1.6, 6.25);
  sup.update(Mode::Attraction, 0.0);
  sup.update(Mode::Repulsion, 1.0);
  sup.update(Mode::AvoidA, 1.2);
  EXPECT_EQ(sup.update(Mode::Attraction, 3.0), Mode::AvoidA);
  EXPECT_EQ(sup.update(Mode::Attraction, 7.449), Mode::AvoidA);
  EXPECT_EQ(sup.update(Mode::Attraction, 7.451), Mode::Attraction);
}
