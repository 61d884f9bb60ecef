#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapof/control.hpp"
#include "mapof/dynamics.hpp"
#include "mapof/tuning.hpp"

namespace mapof {

struct DwellConfig {
  enum class Kind { Explicit, Auto };

  DwellPolicy policy = DwellPolicy::Corollary;
  Kind kind = Kind::Auto;
  // Explicit
  double t_d1 = 0.0;
  double t_d2 = 0.0;
  // Auto
  double rho = 0.1;
  double mu_min = 0.05;
  std::optional<double> a_override;

  friend bool operator==(const DwellConfig&, const DwellConfig&) = default;
};

/// One scenario file. Several initial positions mean several independent runs.
struct ScenarioConfig {
  std::string name;
  Vec2 target;
  std::vector<Vec2> obstacles;
  std::vector<Vec2> initial_positions;
  Vec2 initial_velocity;
  double r_m = 3.0;
  double r_d = 8.0;
  double d_g = 4.5;
  Gains gains;
  DwellConfig dwell;
  SimOptions sim;
  /// Marks the run the switch-count reference applies to, when there is one.
  std::optional<std::size_t> highlighted_run;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError naming the violated invariant. Returns non-fatal
/// warnings (obstacle spacing below r_d or r_m + r_d).
std::vector<std::string> validate(const ScenarioConfig& cfg);

/// Parses YAML text; parse errors carry the line. Defaults fill omitted keys.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical YAML; doubles round-trip exactly.
std::string dump_scenario(const ScenarioConfig& cfg);
void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path);

std::vector<ScenarioConfig> builtin_scenarios();
std::optional<ScenarioConfig> find_builtin(std::string_view name);

TuningOptions tuning_options(const ScenarioConfig& cfg);

/// Dwell-times the supervisor will use. Auto mode picks the theorem or
/// relaxed T_D2 according to the policy.
DwellPair resolve_dwell(const ScenarioConfig& cfg, const TuningReport& report);

SimSetup make_setup(const ScenarioConfig& cfg, std::size_t run_index, const DwellPair& dwell);

std::string_view policy_name(DwellPolicy p);

}  // namespace mapof
