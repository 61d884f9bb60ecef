#include "mapof/control.hpp"

#include <stdexcept>
#include <string>

#include "mapof/errors.hpp"

namespace mapof {

Vec2 force(Mode mode, const Vec2& xi, const Vec2& target, const PartitionMap* pm, const Gains& gains) {
  if (mode == Mode::Attraction) return gains.k_eta * (target - xi);
  if (pm == nullptr) {
    throw MissingPartitionError("mode " + std::to_string(to_int(mode)) + " needs an active obstacle");
  }
  switch (mode) {
    case Mode::AvoidA:
      return gains.k_g * (pm->g1 - xi);
    case Mode::AvoidB:
      return gains.k_g * (pm->g2 - xi);
    case Mode::Repulsion:
      return -gains.k_zeta * (pm->obstacle - xi);
    case Mode::Attraction:
      break;
  }
  return {};
}

Vec2 force(Mode mode, const Vec2& xi, const PartitionMap& pm, const Gains& gains) {
  return force(mode, xi, pm.target, &pm, gains);
}

Vec2 control_input(Mode mode, const Vec2& xi, const Vec2& v, const Vec2& target, const PartitionMap* pm,
                   const Gains& gains) {
  return force(mode, xi, target, pm, gains) - gains.k_d * v;
}

Vec2 control_input(Mode mode, const Vec2& xi, const Vec2& v, const PartitionMap& pm, const Gains& gains) {
  return control_input(mode, xi, v, pm.target, &pm, gains);
}

SwitchSupervisor::SwitchSupervisor(DwellPolicy policy, double t_d1, double t_d2)
    : policy_(policy), t_d1_(t_d1), t_d2_(t_d2) {
  if (!(t_d1 >= 0.0) || !(t_d2 > t_d1)) {
    throw std::invalid_argument("dwell-times need T_D2 > T_D1 >= 0");
  }
}

void SwitchSupervisor::force_mode(Mode mode, double t) {
  current_ = mode;
  prev_sample_mode_ = mode;
  mode_before_last_switch_ = mode;
  entered_from_unstable_ = false;
  t_last_switch_ = t;
}

void SwitchSupervisor::switch_to(Mode next, double t, const Vec2& position) {
  const Mode from = *current_;
  events_.push_back({t, from, next, position});
  mode_before_last_switch_ = from;
  entered_from_unstable_ = from == Mode::Repulsion;
  t_last_switch_ = t;
  current_ = next;
}

Mode SwitchSupervisor::update(Mode sigma_s, double t, const Vec2& position) {
  if (!current_) {
    current_ = sigma_s;
    prev_sample_mode_ = sigma_s;
    return sigma_s;
  }

  const Mode current = *current_;
  const double held = t - t_last_switch_;
  Mode next = current;

  if (sigma_s == Mode::Repulsion) {
    if (current != Mode::Repulsion && (policy_ == DwellPolicy::Corollary || held > t_d1_)) {
      next = Mode::Repulsion;
    }
  } else if (sigma_s != current) {
    if (current == Mode::Repulsion) {
      next = sigma_s;
    } else if (entered_from_unstable_) {
      if (held > t_d2_) next = sigma_s;
    } else if (held > t_d1_) {
      next = sigma_s;
    }
  }

  if (next != current) switch_to(next, t, position);
  prev_sample_mode_ = sigma_s;
  return next;
}

}  // namespace mapof
