#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "mapof/geometry.hpp"
#include "mapof/vec2.hpp"

namespace mapof {

/// Potential-function gains. k_eta, k_g, k_zeta in 1/s^2, k_d in 1/s.
struct Gains {
  double k_eta = 0.0;
  double k_g = 0.0;
  double k_zeta = 0.0;
  double k_d = 0.0;

  [[nodiscard]] bool valid() const { return k_eta > 0.0 && k_g > 0.0 && k_zeta > 0.0 && k_d > 0.0; }
  friend bool operator==(const Gains&, const Gains&) = default;
};

/// Theorem: every switch out of a stable mode, including into repulsion, waits T_D1.
/// Corollary: repulsion is entered immediately; T_D2 follows each repulsion episode.
enum class DwellPolicy { Theorem, Corollary };

struct SwitchEvent {
  double t = 0.0;
  Mode from_mode = Mode::Attraction;
  Mode to_mode = Mode::Attraction;
  Vec2 position;

  friend bool operator==(const SwitchEvent&, const SwitchEvent&) = default;
};

/// Evaluates the potential function of `mode`. `pm` may be null for Attraction.
/// Throws MissingPartitionError for modes 2-4 without a partition map.
Vec2 force(Mode mode, const Vec2& xi, const Vec2& target, const PartitionMap* pm, const Gains& gains);
Vec2 force(Mode mode, const Vec2& xi, const PartitionMap& pm, const Gains& gains);

/// u = F_mode(xi) - k_d v
Vec2 control_input(Mode mode, const Vec2& xi, const Vec2& v, const Vec2& target, const PartitionMap* pm,
                   const Gains& gains);
Vec2 control_input(Mode mode, const Vec2& xi, const Vec2& v, const PartitionMap& pm, const Gains& gains);

/// State- and time-dependent switching logic layered on top of the region
/// classification. Sampled once per integration step; the previous sample
/// stands in for t^-.
class SwitchSupervisor {
 public:
  /// Requires T_D2 > T_D1 >= 0 (std::invalid_argument otherwise).
  SwitchSupervisor(DwellPolicy policy, double t_d1, double t_d2);

  /// Feeds the region classification at time t and returns the active mode.
  /// The first call adopts sigma_s without recording a switch.
  Mode update(Mode sigma_s, double t, const Vec2& position = {});

  /// Starts the supervisor in `mode` as if a switch had just happened at `t`.
  void force_mode(Mode mode, double t);

  [[nodiscard]] bool initialized() const { return current_.has_value(); }
  [[nodiscard]] Mode current_mode() const { return current_.value_or(Mode::Attraction); }
  [[nodiscard]] double t_last_switch() const { return t_last_switch_; }
  [[nodiscard]] Mode mode_before_last_switch() const { return mode_before_last_switch_; }
  [[nodiscard]] Mode prev_sample_mode() const { return prev_sample_mode_; }
  [[nodiscard]] bool entered_from_unstable() const { return entered_from_unstable_; }
  [[nodiscard]] DwellPolicy policy() const { return policy_; }
  [[nodiscard]] double t_d1() const { return t_d1_; }
  [[nodiscard]] double t_d2() const { return t_d2_; }
  [[nodiscard]] const std::vector<SwitchEvent>& events() const { return events_; }

 private:
  void switch_to(Mode next, double t, const Vec2& position);

  DwellPolicy policy_;
  double t_d1_;
  double t_d2_;
  std::optional<Mode> current_;
  double t_last_switch_ = -std::numeric_limits<double>::infinity();
  Mode mode_before_last_switch_ = Mode::Attraction;
  Mode prev_sample_mode_ = Mode::Attraction;
  bool entered_from_unstable_ = false;
  std::vector<SwitchEvent> events_;
};

}  // namespace mapof
