#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mapof/control.hpp"
#include "mapof/dynamics.hpp"
#include "mapof/tuning.hpp"

namespace mapof {

/// Mode equilibrium in error coordinates, x0 = (-A)^{-1} b, from the block structure.
Eigen::Vector4d mode_equilibrium(Mode mode, const Gains& gains, const PartitionMap* pm, const Vec2& target);

/// Equilibria visited by a run: entry 0 is the initial mode, entry k the mode
/// entered at the k-th switch.
struct EquilibriumOffsets {
  std::vector<double> t;                 // t_0 (first sample) then switch times
  std::vector<Mode> modes;
  std::vector<Eigen::Vector4d> state;    // x(t_k)
  std::vector<Eigen::Vector4d> x0;       // equilibrium of modes[k]
  std::vector<Eigen::Vector4d> delta;    // delta[k] = x0[k-1] - x0[k]; delta[0] = 0
  double delta_sup = 0.0;
};

EquilibriumOffsets equilibrium_offsets(const SimLog& log, const SimSetup& setup);

struct DwellViolation {
  std::size_t event_index = 0;
  SwitchEvent event;
  double gap = 0.0;
  double required = 0.0;
};

struct DwellReport {
  std::vector<DwellViolation> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Replays the timing rules on consecutive switch events.
DwellReport check_dwell_compliance(std::span<const SwitchEvent> events, double t_d1, double t_d2,
                                   DwellPolicy policy);
DwellReport check_dwell_compliance(const SimLog& log, double t_d1, double t_d2, DwellPolicy policy);

struct BoundCheck {
  std::size_t k = 0;
  double t = 0.0;
  double norm_z = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  /// Binding for the verdict. Under the relaxed policy only switches that land
  /// in a stable mode close a stable-unstable-stable group.
  bool checkpoint = true;
};

struct SwitchBoundReport {
  std::vector<BoundCheck> checks;
  double delta_sup = 0.0;
  [[nodiscard]] bool ok() const;
  [[nodiscard]] double min_margin() const;
};

/// Right-hand side of the switch-instant bound for index k.
double switch_bound(std::size_t k, double norm_z0, double delta, double rho, DwellPolicy policy);

SwitchBoundReport check_switch_bound(const EquilibriumOffsets& offsets, double rho, DwellPolicy policy);

struct SeparationReport {
  double min_separation = 0.0;
  double t_at_min = 0.0;
  double r_s = 0.0;
  bool below_r_s = false;
};

SeparationReport check_min_separation(const SimLog& log, const std::vector<Vec2>& obstacles, double r_s);

/// Per-mode check of ||e^{M_i t}||_2 <= e^{a_i -/+ alpha_i t} (1 + 1e-9) on the grid.
std::array<bool, 4> check_exp_bounds(const TuningReport& report, std::span<const double> t_grid);

/// 0, step, ..., t_end (inclusive).
std::vector<double> uniform_grid(double t_end, double step);

struct ProbeResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;  // drift (m) for the origin probe, departure (m) otherwise
  double threshold = 0.0;
};

/// Starts at the target and at every virtual target. Throws HypothesisError
/// if an obstacle lies within r_d of the target.
std::vector<ProbeResult> check_equilibrium_uniqueness(const SimSetup& setup);

struct VerifyReport {
  DwellReport dwell;
  SwitchBoundReport bound;
  SeparationReport separation;
  std::array<bool, 4> exp_bound_ok{};
  std::vector<ProbeResult> probes;
  std::string probe_error;  // set when the probe hypothesis fails

  [[nodiscard]] bool dwell_ok() const { return dwell.ok(); }
  [[nodiscard]] bool bounds_ok() const;
  [[nodiscard]] bool ok() const;
};

struct VerifyOptions {
  double r_s = 0.0;  // <= 0 selects r_m / sqrt(2)
  bool run_probes = true;
};

VerifyReport verify_run(const SimLog& log, const SimSetup& setup, const TuningReport& tuning,
                        const VerifyOptions& options = {});

}  // namespace mapof
