#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mapof/control.hpp"
#include "mapof/geometry.hpp"
#include "mapof/vec2.hpp"

namespace mapof {

struct SimState {
  double t = 0.0;
  Vec2 xi;  // position, m
  Vec2 v;   // velocity, m/s
};

/// x1 = eta - xi, x2 = -v
struct ErrorState {
  Vec2 x1;
  Vec2 x2;

  /// Stacked as (x1.x, x1.y, x2.x, x2.y).
  [[nodiscard]] Eigen::Vector4d stacked() const { return {x1.x, x1.y, x2.x, x2.y}; }
};

ErrorState error_coordinates(const SimState& s, const Vec2& target);

/// Affine error dynamics x' = A x + b of one mode, with A = M (x) I_2.
struct ModeMatrices {
  Eigen::Matrix2d M;
  Eigen::Matrix4d A;
  Eigen::Vector4d b;
};

/// Throws MissingPartitionError for modes 2-4 when `pm` is null.
ModeMatrices system_matrices(Mode mode, const Gains& gains, const PartitionMap* pm, const Vec2& target);

/// Companion block [[0, 1], [s k, -k_d]] of a mode (s = +1 only for repulsion).
Eigen::Matrix2d mode_block(Mode mode, const Gains& gains);

struct ActiveObstacle {
  Vec2 position;                     // single obstacle or centroid of the close group
  std::vector<std::size_t> indices;  // ascending

  friend bool operator==(const ActiveObstacle&, const ActiveObstacle&) = default;
};

/// Obstacles strictly within r_d of xi. Several at once are merged into their centroid.
std::optional<ActiveObstacle> active_obstacle(const Vec2& xi, const std::vector<Vec2>& obstacles, double r_d,
                                              double r_m);

/// Classical RK4 for xi'' = u with u held over the step.
SimState rk4_step(const SimState& s, const Vec2& u, double dt);

/// Keeps the partition map in effect. The map is rebuilt only when the set of
/// active obstacles changes and retained while none is active so a held
/// avoidance mode still has its virtual target.
class PartitionTracker {
 public:
  PartitionTracker(Vec2 target, double r_m, double r_d, double d_g);

  void update(const std::optional<ActiveObstacle>& active);

  /// Map of the currently active obstacle, or null if none is in range.
  [[nodiscard]] const PartitionMap* active() const { return has_active_ ? &*map_ : nullptr; }
  /// Active map, else the last one built, else null.
  [[nodiscard]] const PartitionMap* in_effect() const { return map_ ? &*map_ : nullptr; }
  [[nodiscard]] const std::vector<std::size_t>& active_indices() const { return indices_; }

 private:
  Vec2 target_;
  double r_m_;
  double r_d_;
  double d_g_;
  std::optional<PartitionMap> map_;
  std::optional<Vec2> built_for_;
  std::vector<std::size_t> indices_;
  bool has_active_ = false;
};

enum class Outcome { ReachedGoal, Timeout, Collision };
std::string_view outcome_name(Outcome o);

struct Sample {
  double t = 0.0;
  Vec2 xi;
  Vec2 v;
  Mode sigma_s = Mode::Attraction;
  Mode sigma = Mode::Attraction;
  std::vector<std::size_t> active;  // empty when no obstacle is in range

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct SimLog {
  std::vector<Sample> samples;
  std::vector<SwitchEvent> events;
  Outcome outcome = Outcome::Timeout;
};

struct SimOptions {
  double dt = 1e-3;
  double t_max = 60.0;
  double eps_goal = 0.1;
  double eps_vel = 0.05;
  double eps_collision = 0.05;
  bool stop_at_goal = true;
  /// Start in this mode as if a switch had happened at t = 0.
  std::optional<Mode> initial_mode;

  friend bool operator==(const SimOptions&, const SimOptions&) = default;
};

/// Everything one closed-loop run needs, with dwell-times already resolved.
struct SimSetup {
  Vec2 target;
  std::vector<Vec2> obstacles;
  Vec2 initial_position;
  Vec2 initial_velocity;
  double r_m = 3.0;
  double r_d = 8.0;
  double d_g = 4.5;
  Gains gains;
  DwellPolicy policy = DwellPolicy::Corollary;
  double t_d1 = 0.0;
  double t_d2 = 0.0;
  SimOptions options;
};

/// Fixed-step closed loop. Each step: active obstacle, partition refresh,
/// region, supervisor, control, RK4. Sample times are n * dt.
SimLog simulate(const SimSetup& setup);

/// Outcome implied by the last sample of a log under the setup's thresholds.
Outcome terminal_outcome(const Sample& last, const SimSetup& setup);

}  // namespace mapof
