#include "mapof/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mapof/errors.hpp"

namespace mapof {

ErrorState error_coordinates(const SimState& s, const Vec2& target) { return {target - s.xi, -s.v}; }

Eigen::Matrix2d mode_block(Mode mode, const Gains& gains) {
  double stiffness = 0.0;
  switch (mode) {
    case Mode::Attraction:
      stiffness = -gains.k_eta;
      break;
    case Mode::AvoidA:
    case Mode::AvoidB:
      stiffness = -gains.k_g;
      break;
    case Mode::Repulsion:
      stiffness = gains.k_zeta;
      break;
  }
  Eigen::Matrix2d m;
  m << 0.0, 1.0, stiffness, -gains.k_d;
  return m;
}

ModeMatrices system_matrices(Mode mode, const Gains& gains, const PartitionMap* pm, const Vec2& target) {
  ModeMatrices out;
  out.M = mode_block(mode, gains);
  out.A = Eigen::Matrix4d::Zero();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.A.block<2, 2>(2 * r, 2 * c) = out.M(r, c) * Eigen::Matrix2d::Identity();
    }
  }
  out.b = Eigen::Vector4d::Zero();
  if (mode == Mode::Attraction) return out;
  if (pm == nullptr) {
    throw MissingPartitionError("system matrices of mode " + std::to_string(to_int(mode)) +
                                " need a partition map");
  }
  Vec2 offset;
  switch (mode) {
    case Mode::AvoidA:
      offset = -gains.k_g * (pm->g1 - target);
      break;
    case Mode::AvoidB:
      offset = -gains.k_g * (pm->g2 - target);
      break;
    case Mode::Repulsion:
      offset = gains.k_zeta * (pm->obstacle - target);
      break;
    case Mode::Attraction:
      break;
  }
  out.b(2) = offset.x;
  out.b(3) = offset.y;
  return out;
}

std::optional<ActiveObstacle> active_obstacle(const Vec2& xi, const std::vector<Vec2>& obstacles, double r_d,
                                              double /*r_m*/) {
  ActiveObstacle found;
  Vec2 sum;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (distance(xi, obstacles[i]) < r_d) {
      found.indices.push_back(i);
      sum += obstacles[i];
    }
  }
  if (found.indices.empty()) return std::nullopt;
  found.position = found.indices.size() == 1 ? obstacles[found.indices.front()]
                                             : sum / static_cast<double>(found.indices.size());
  return found;
}

SimState rk4_step(const SimState& s, const Vec2& u, double dt) {
  // State (xi, v), derivative (v, u); u is constant over the step.
  const Vec2 k1x = s.v;
  const Vec2 k1v = u;
  const Vec2 k2x = s.v + (0.5 * dt) * k1v;
  const Vec2 k2v = u;
  const Vec2 k3x = s.v + (0.5 * dt) * k2v;
  const Vec2 k3v = u;
  const Vec2 k4x = s.v + dt * k3v;
  const Vec2 k4v = u;

  SimState next;
  next.t = s.t + dt;
  next.xi = s.xi + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  next.v = s.v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return next;
}

PartitionTracker::PartitionTracker(Vec2 target, double r_m, double r_d, double d_g)
    : target_(target), r_m_(r_m), r_d_(r_d), d_g_(d_g) {}

void PartitionTracker::update(const std::optional<ActiveObstacle>& active) {
  if (!active) {
    has_active_ = false;
    indices_.clear();
    return;
  }
  if (!has_active_ || indices_ != active->indices || !built_for_ || *built_for_ != active->position) {
    map_ = build_partition(target_, active->position, r_m_, r_d_, d_g_);
    built_for_ = active->position;
  }
  indices_ = active->indices;
  has_active_ = true;
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::ReachedGoal:
      return "ReachedGoal";
    case Outcome::Timeout:
      return "Timeout";
    case Outcome::Collision:
      return "Collision";
  }
  return "Unknown";
}

namespace {

double nearest_obstacle(const Vec2& xi, const std::vector<Vec2>& obstacles) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles) best = std::min(best, distance(xi, o));
  return best;
}

std::optional<Outcome> check_termination(const Sample& s, const SimSetup& setup) {
  const auto& opt = setup.options;
  if (nearest_obstacle(s.xi, setup.obstacles) < opt.eps_collision) return Outcome::Collision;
  if (opt.stop_at_goal && distance(s.xi, setup.target) < opt.eps_goal && norm(s.v) < opt.eps_vel) {
    return Outcome::ReachedGoal;
  }
  if (s.t > opt.t_max) return Outcome::Timeout;
  return std::nullopt;
}

}  // namespace

Outcome terminal_outcome(const Sample& last, const SimSetup& setup) {
  if (auto o = check_termination(last, setup)) return *o;
  return Outcome::Timeout;
}

SimLog simulate(const SimSetup& setup) {
  const auto& opt = setup.options;
  if (!(opt.dt > 0.0)) throw std::invalid_argument("dt must be positive");

  SwitchSupervisor supervisor(setup.policy, setup.t_d1, setup.t_d2);
  if (opt.initial_mode) supervisor.force_mode(*opt.initial_mode, 0.0);
  PartitionTracker tracker(setup.target, setup.r_m, setup.r_d, setup.d_g);

  SimLog log;
  log.samples.reserve(static_cast<std::size_t>(std::min(opt.t_max / opt.dt, 1e7)) + 2);
  SimState state{0.0, setup.initial_position, setup.initial_velocity};

  for (std::size_t step = 0;; ++step) {
    state.t = static_cast<double>(step) * opt.dt;

    const auto active = active_obstacle(state.xi, setup.obstacles, setup.r_d, setup.r_m);
    tracker.update(active);
    const PartitionMap* pm = tracker.active();
    const Mode sigma_s = pm ? classify_region(state.xi, *pm) : Mode::Attraction;
    const Mode sigma = supervisor.update(sigma_s, state.t, state.xi);

    log.samples.push_back({state.t, state.xi, state.v, sigma_s, sigma, tracker.active_indices()});
    if (auto done = check_termination(log.samples.back(), setup)) {
      log.outcome = *done;
      break;
    }

    const Vec2 u = control_input(sigma, state.xi, state.v, setup.target, tracker.in_effect(), setup.gains);
    state = rk4_step(state, u, opt.dt);
  }
  log.events = supervisor.events();
  return log;
}

}  // namespace mapof
