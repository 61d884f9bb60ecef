#include "mapof/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mapof/errors.hpp"

namespace mapof {

Eigen::Vector4d mode_equilibrium(Mode mode, const Gains& gains, const PartitionMap* pm, const Vec2& target) {
  if (mode == Mode::Attraction) return Eigen::Vector4d::Zero();
  const ModeMatrices mm = system_matrices(mode, gains, pm, target);
  // (M (x) I) x0 = -b with M = [[0, 1], [s, -k_d]] gives x0_vel = 0, x0_pos = -b_vel / s.
  const double s = mm.M(1, 0);
  return {-mm.b(2) / s, -mm.b(3) / s, 0.0, 0.0};
}

namespace {

std::optional<ActiveObstacle> rebuild_active(const std::vector<std::size_t>& indices,
                                             const std::vector<Vec2>& obstacles) {
  if (indices.empty()) return std::nullopt;
  ActiveObstacle a;
  a.indices = indices;
  Vec2 sum;
  for (auto i : indices) {
    if (i >= obstacles.size()) throw std::out_of_range("log references an unknown obstacle index");
    sum += obstacles[i];
  }
  a.position = indices.size() == 1 ? obstacles[indices.front()] : sum / static_cast<double>(indices.size());
  return a;
}

}  // namespace

EquilibriumOffsets equilibrium_offsets(const SimLog& log, const SimSetup& setup) {
  EquilibriumOffsets out;
  if (log.samples.empty()) return out;

  PartitionTracker tracker(setup.target, setup.r_m, setup.r_d, setup.d_g);
  std::size_t next_event = 0;
  auto record = [&](const Sample& s, Mode mode) {
    const SimState st{s.t, s.xi, s.v};
    out.t.push_back(s.t);
    out.modes.push_back(mode);
    out.state.push_back(error_coordinates(st, setup.target).stacked());
    out.x0.push_back(mode_equilibrium(mode, setup.gains, tracker.in_effect(), setup.target));
    if (out.x0.size() == 1) {
      out.delta.push_back(Eigen::Vector4d::Zero());
    } else {
      out.delta.push_back(out.x0[out.x0.size() - 2] - out.x0.back());
      out.delta_sup = std::max(out.delta_sup, out.delta.back().norm());
    }
  };

  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    const Sample& s = log.samples[i];
    tracker.update(rebuild_active(s.active, setup.obstacles));
    if (i == 0) record(s, s.sigma);
    while (next_event < log.events.size() && log.events[next_event].t <= s.t) {
      if (log.events[next_event].t == s.t) record(s, log.events[next_event].to_mode);
      ++next_event;
    }
  }
  return out;
}

DwellReport check_dwell_compliance(std::span<const SwitchEvent> events, double t_d1, double t_d2,
                                   DwellPolicy policy) {
  DwellReport rep;
  for (std::size_t k = 1; k < events.size(); ++k) {
    const SwitchEvent& prev = events[k - 1];
    const SwitchEvent& ev = events[k];
    const double gap = ev.t - prev.t;
    double required = -1.0;  // negative: unrestricted
    if (ev.from_mode == Mode::Repulsion) {
      required = -1.0;
    } else if (ev.to_mode == Mode::Repulsion) {
      if (policy == DwellPolicy::Theorem) required = t_d1;
    } else {
      required = prev.from_mode == Mode::Repulsion ? t_d2 : t_d1;
    }
    if (required >= 0.0 && !(gap > required)) rep.violations.push_back({k, ev, gap, required});
  }
  return rep;
}

DwellReport check_dwell_compliance(const SimLog& log, double t_d1, double t_d2, DwellPolicy policy) {
  return check_dwell_compliance(std::span<const SwitchEvent>(log.events), t_d1, t_d2, policy);
}

bool SwitchBoundReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return !c.checkpoint || c.margin >= 0.0; });
}

double SwitchBoundReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) {
    if (c.checkpoint) m = std::min(m, c.margin);
  }
  return m;
}

double switch_bound(std::size_t k, double norm_z0, double delta, double rho, DwellPolicy policy) {
  const double kk = static_cast<double>(k);
  if (policy == DwellPolicy::Theorem) {
    // Geometric sum over i = 1..k-1 of e^{-(k-i) rho/2}; empty for k <= 1.
    const double tail = std::max(0.0, (std::exp(-(kk - 1.0) * rho / 2.0) - 1.0) / (1.0 - std::exp(rho / 2.0)));
    return std::exp(-kk * rho / 2.0) * norm_z0 + tail * delta + delta;
  }
  // Sum over i = 1..k-3 of e^{-(k-i) rho/3}; empty for k <= 3.
  const double tail = std::max(
      0.0, (std::exp(-rho * (kk - 1.0) / 3.0) - std::exp(-2.0 * rho / 3.0)) / (1.0 - std::exp(rho / 3.0)));
  const double c = std::exp(-2.0 * rho) + std::exp(-rho);
  return std::exp(-kk * rho / 3.0) * norm_z0 + (tail + c + 1.0) * delta;
}

SwitchBoundReport check_switch_bound(const EquilibriumOffsets& offsets, double rho, DwellPolicy policy) {
  SwitchBoundReport rep;
  rep.delta_sup = offsets.delta_sup;
  if (offsets.state.empty()) return rep;
  const double z0 = (offsets.state[0] - offsets.x0[0]).norm();
  for (std::size_t k = 0; k < offsets.state.size(); ++k) {
    BoundCheck c;
    c.k = k;
    c.t = offsets.t[k];
    c.norm_z = (offsets.state[k] - offsets.x0[k]).norm();
    c.bound = switch_bound(k, z0, offsets.delta_sup, rho, policy);
    c.margin = c.bound - c.norm_z;
    c.checkpoint = policy == DwellPolicy::Theorem || is_stable(offsets.modes[k]);
    rep.checks.push_back(c);
  }
  return rep;
}

SeparationReport check_min_separation(const SimLog& log, const std::vector<Vec2>& obstacles, double r_s) {
  SeparationReport rep;
  rep.r_s = r_s;
  rep.min_separation = std::numeric_limits<double>::infinity();
  for (const auto& s : log.samples) {
    for (const auto& o : obstacles) {
      const double d = distance(s.xi, o);
      if (d < rep.min_separation) {
        rep.min_separation = d;
        rep.t_at_min = s.t;
      }
    }
  }
  rep.below_r_s = rep.min_separation < r_s;
  return rep;
}

std::vector<double> uniform_grid(double t_end, double step) {
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::llround(t_end / step));
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) * step);
  return grid;
}

std::array<bool, 4> check_exp_bounds(const TuningReport& report, std::span<const double> t_grid) {
  std::array<bool, 4> ok{};
  for (int i = 0; i < 4; ++i) {
    const Mode mode = mode_from_int(i + 1);
    const Eigen::Matrix2d m = mode_block(mode, report.gains);
    const double sign = is_stable(mode) ? -1.0 : 1.0;
    const ModeBound& mb = report.modes[i];
    ok[i] = std::all_of(t_grid.begin(), t_grid.end(), [&](double t) {
      const double lhs = spectral_norm2(expm2(m, t));
      return lhs <= std::exp(mb.offset + sign * mb.alpha * t) * (1.0 + 1e-9);
    });
  }
  return ok;
}

std::vector<ProbeResult> check_equilibrium_uniqueness(const SimSetup& setup) {
  for (std::size_t j = 0; j < setup.obstacles.size(); ++j) {
    if (!(distance(setup.target, setup.obstacles[j]) > setup.r_d)) {
      std::ostringstream msg;
      msg << "obstacle " << j << " lies within r_d = " << setup.r_d << " m of the target";
      throw HypothesisError(msg.str());
    }
  }

  std::vector<ProbeResult> results;

  SimSetup origin = setup;
  origin.initial_position = setup.target;
  origin.initial_velocity = {};
  origin.options.stop_at_goal = false;
  origin.options.t_max = 10.0;
  origin.options.initial_mode.reset();
  const SimLog at_rest = simulate(origin);
  double drift = 0.0;
  for (const auto& s : at_rest.samples) drift = std::max(drift, distance(s.xi, setup.target));
  results.push_back({"origin", drift < 1e-9, drift, 1e-9});

  const double horizon = setup.t_d1 + 2.0;
  for (std::size_t j = 0; j < setup.obstacles.size(); ++j) {
    const PartitionMap pm = build_partition(setup.target, setup.obstacles[j], setup.r_m, setup.r_d, setup.d_g);
    const std::array<std::pair<Mode, Vec2>, 2> starts = {{{Mode::AvoidA, pm.g1}, {Mode::AvoidB, pm.g2}}};
    for (const auto& [mode, start] : starts) {
      SimSetup probe = setup;
      probe.initial_position = start;
      probe.initial_velocity = {};
      probe.options.stop_at_goal = false;
      probe.options.t_max = horizon;
      probe.options.initial_mode = mode;
      const SimLog log = simulate(probe);
      double departure = 0.0;
      for (const auto& s : log.samples) {
        if (s.t <= horizon) departure = distance(s.xi, start);
      }
      std::ostringstream name;
      name << (mode == Mode::AvoidA ? "g1" : "g2") << "[obstacle " << j << "]";
      results.push_back({name.str(), departure > 0.1, departure, 0.1});
    }
  }
  return results;
}

bool VerifyReport::bounds_ok() const {
  return bound.ok() && std::all_of(exp_bound_ok.begin(), exp_bound_ok.end(), [](bool b) { return b; });
}

bool VerifyReport::ok() const {
  return dwell_ok() && bounds_ok() &&
         std::all_of(probes.begin(), probes.end(), [](const ProbeResult& p) { return p.passed; });
}

VerifyReport verify_run(const SimLog& log, const SimSetup& setup, const TuningReport& tuning,
                        const VerifyOptions& options) {
  VerifyReport rep;
  rep.dwell = check_dwell_compliance(log.events, setup.t_d1, setup.t_d2, setup.policy);
  rep.bound = check_switch_bound(equilibrium_offsets(log, setup), tuning.rho, setup.policy);
  const double r_s = options.r_s > 0.0 ? options.r_s : setup.r_m / std::sqrt(2.0);
  rep.separation = check_min_separation(log, setup.obstacles, r_s);
  const auto grid = uniform_grid(10.0, 0.01);
  rep.exp_bound_ok = check_exp_bounds(tuning, grid);
  if (options.run_probes) {
    try {
      rep.probes = check_equilibrium_uniqueness(setup);
    } catch (const HypothesisError& e) {
      rep.probe_error = e.what();
    }
  }
  return rep;
}

}  // namespace mapof
