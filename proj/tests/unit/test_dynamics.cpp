#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mapof/dynamics.hpp"
#include "mapof/errors.hpp"

using namespace mapof;
using mapof::testing::builtin_setup;
using mapof::testing::kScenarioGains;

TEST(ErrorCoordinates, Examples) {
  const Vec2 eta{18.0, -1.0};
  const auto e0 = error_coordinates({0.0, eta, {0.0, 0.0}}, eta);
  EXPECT_EQ(e0.stacked(), Eigen::Vector4d::Zero());
  const auto e1 = error_coordinates({0.0, {-5.0, 2.0}, {0.0, 0.0}}, eta);
  EXPECT_EQ(e1.stacked(), Eigen::Vector4d(23.0, -3.0, 0.0, 0.0));
  const auto e2 = error_coordinates({0.0, eta, {1.0, -1.0}}, eta);
  EXPECT_EQ(e2.stacked(), Eigen::Vector4d(0.0, 0.0, -1.0, 1.0));
}

TEST(SystemMatrices, AttractionBlock) {
  const auto m = system_matrices(Mode::Attraction, kScenarioGains, nullptr, {18.0, -1.0});
  EXPECT_EQ(m.M(0, 0), 0.0);
  EXPECT_EQ(m.M(0, 1), 1.0);
  EXPECT_EQ(m.M(1, 0), -3.77);
  EXPECT_EQ(m.M(1, 1), -4.37);
  EXPECT_EQ(m.b, Eigen::Vector4d::Zero());
  // Kronecker structure with I_2.
  EXPECT_EQ(m.A(2, 0), -3.77);
  EXPECT_EQ(m.A(3, 1), -3.77);
  EXPECT_EQ(m.A(2, 1), 0.0);
}

TEST(SystemMatrices, RepulsionSignFlip) {
  const auto pm = build_partition({18.0, -1.0}, {6.0, 0.0}, 3.0, 8.0, 4.5);
  const auto m = system_matrices(Mode::Repulsion, kScenarioGains, &pm, {18.0, -1.0});
  EXPECT_EQ(m.M(1, 0), 20.0);
}

TEST(SystemMatrices, MissingPartitionThrows) {
  EXPECT_THROW(system_matrices(Mode::AvoidB, kScenarioGains, nullptr, {0.0, 0.0}), MissingPartitionError);
}

// x1' = -v and x2' = -u must equal A x + b for every mode and state.
TEST(SystemMatrices, MatchClosedLoop) {
  const Vec2 eta{18.0, -1.0};
  const auto pm = build_partition(eta, {6.0, 0.0}, 3.0, 8.0, 4.5);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int mode = 1; mode <= 4; ++mode) {
    const Mode m = mode_from_int(mode);
    const auto sys = system_matrices(m, kScenarioGains, &pm, eta);
    for (int i = 0; i < 100; ++i) {
      const SimState s{0.0, {u(rng), u(rng)}, {u(rng), u(rng)}};
      const Vec2 acc = control_input(m, s.xi, s.v, pm, kScenarioGains);
      const Eigen::Vector4d expected(-s.v.x, -s.v.y, -acc.x, -acc.y);
      const Eigen::Vector4d got = sys.A * error_coordinates(s, eta).stacked() + sys.b;
      EXPECT_LT((got - expected).norm(), 1e-10 * (1.0 + expected.norm())) << "mode " << mode;
    }
  }
}

TEST(ActiveObstacle, Examples) {
  EXPECT_FALSE(active_obstacle({-5.0, 2.0}, {{6.0, 0.0}}, 8.0, 3.0).has_value());
  const auto one = active_obstacle({0.0, 0.0}, {{6.0, 0.0}}, 8.0, 3.0);
  ASSERT_TRUE(one);
  EXPECT_EQ(one->position, (Vec2{6.0, 0.0}));
  EXPECT_EQ(one->indices, (std::vector<std::size_t>{0}));
  const auto merged = active_obstacle({0.0, 0.0}, {{3.0, 1.0}, {3.0, -1.0}}, 8.0, 3.0);
  ASSERT_TRUE(merged);
  EXPECT_EQ(merged->position, (Vec2{3.0, 0.0}));
  EXPECT_EQ(merged->indices, (std::vector<std::size_t>{0, 1}));
}

TEST(Rk4, FreeDriftAndConstantAcceleration) {
  const auto s1 = rk4_step({0.0, {0.0, 0.0}, {1.0, 0.0}}, {0.0, 0.0}, 0.5);
  EXPECT_DOUBLE_EQ(s1.xi.x, 0.5);
  EXPECT_DOUBLE_EQ(s1.xi.y, 0.0);
  EXPECT_DOUBLE_EQ(s1.t, 0.5);
  const auto s2 = rk4_step({0.0, {0.0, 0.0}, {0.0, 0.0}}, {2.0, 0.0}, 1.0);
  EXPECT_DOUBLE_EQ(s2.xi.x, 1.0);
  EXPECT_DOUBLE_EQ(s2.v.x, 2.0);
}

// With u = -k (xi - eta) - k_d v the energy k|xi-eta|^2/2 + |v|^2/2 cannot grow.
TEST(Rk4, AttractionEnergyNonIncreasing) {
  const Vec2 eta{18.0, -1.0};
  SimState s{0.0, {-5.0, 2.0}, {3.0, 4.0}};
  const auto energy = [&](const SimState& st) {
    const Vec2 e = st.xi - eta;
    return 0.5 * kScenarioGains.k_eta * dot(e, e) + 0.5 * dot(st.v, st.v);
  };
  double prev = energy(s);
  for (int i = 0; i < 10000; ++i) {
    s = rk4_step(s, control_input(Mode::Attraction, s.xi, s.v, eta, nullptr, kScenarioGains), 1e-3);
    const double e = energy(s);
    ASSERT_LE(e, prev * (1.0 + 1e-12) + 1e-15) << "step " << i;
    prev = e;
  }
}

TEST(PartitionTracker, KeepsLastMapWhenNothingActive) {
  PartitionTracker tr({18.0, -1.0}, 3.0, 8.0, 4.5);
  EXPECT_EQ(tr.in_effect(), nullptr);
  tr.update(ActiveObstacle{{6.0, 0.0}, {0}});
  ASSERT_NE(tr.active(), nullptr);
  tr.update(std::nullopt);
  EXPECT_EQ(tr.active(), nullptr);
  ASSERT_NE(tr.in_effect(), nullptr);
  EXPECT_EQ(tr.in_effect()->obstacle, (Vec2{6.0, 0.0}));
}

TEST(Simulate, StartAtGoal) {
  SimSetup s = builtin_setup("scenario1");
  s.initial_position = s.target;
  const auto log = simulate(s);
  EXPECT_EQ(log.outcome, Outcome::ReachedGoal);
  EXPECT_EQ(log.samples.size(), 1u);
  EXPECT_TRUE(log.events.empty());
}

TEST(Simulate, ScenarioOneSwitchTimes) {
  const auto log = simulate(builtin_setup("scenario1"));
  EXPECT_EQ(log.outcome, Outcome::ReachedGoal);
  ASSERT_EQ(log.events.size(), 2u);
  EXPECT_NEAR(log.events[0].t, 0.33, 0.15);
  EXPECT_EQ(log.events[0].from_mode, Mode::Attraction);
  EXPECT_NEAR(log.events[1].t, 1.93, 0.15);
  EXPECT_EQ(log.events[1].to_mode, Mode::Attraction);
  EXPECT_LT(distance(log.samples.back().xi, Vec2{18.0, -1.0}), 0.1);
}

TEST(Simulate, SampleTimesAreMultiplesOfStep) {
  const auto log = simulate(builtin_setup("scenario1"));
  for (std::size_t n = 0; n < log.samples.size(); n += 997) EXPECT_EQ(log.samples[n].t, n * 1e-3);
}

TEST(Simulate, RepulsionOnlyInsideSecurityCircle) {
  for (std::size_t run = 0; run < 8; ++run) {
    const auto setup = builtin_setup("scenario2", run);
    const auto log = simulate(setup);
    for (const auto& s : log.samples) {
      if (s.sigma != Mode::Repulsion || s.sigma_s == Mode::Repulsion) continue;
      ADD_FAILURE() << "run " << run << " holds repulsion outside the zone at t=" << s.t;
      break;
    }
  }
}

TEST(Simulate, HighlightedScenarioTwoRun) {
  const auto cfg = *find_builtin("scenario2");
  ASSERT_TRUE(cfg.highlighted_run);
  const auto log = simulate(builtin_setup("scenario2", *cfg.highlighted_run));
  EXPECT_EQ(log.outcome, Outcome::ReachedGoal);
  EXPECT_EQ(log.events.size(), 8u);
  const bool repulsion = std::any_of(log.events.begin(), log.events.end(),
                                     [](const SwitchEvent& e) { return e.to_mode == Mode::Repulsion; });
  EXPECT_TRUE(repulsion);
}

TEST(Simulate, Deterministic) {
  const auto setup = builtin_setup("scenario2", 3);
  const auto a = simulate(setup);
  const auto b = simulate(setup);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  EXPECT_TRUE(a.samples == b.samples);
  EXPECT_TRUE(a.events == b.events);
}

TEST(Simulate, ShortHorizonTimesOut) {
  SimSetup s = builtin_setup("scenario1");
  s.options.t_max = 0.01;
  EXPECT_EQ(simulate(s).outcome, Outcome::Timeout);
}
