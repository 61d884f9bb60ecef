#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mapof/scenario.hpp"

namespace mapof {

enum ExitCode : int {
  kExitOk = 0,
  kExitSimulationFailure = 1,
  kExitConfigError = 2,
  kExitVerificationFailure = 3,
};

/// A path to a scenario file or the name of a built-in scenario.
ScenarioConfig resolve_scenario(const std::string& config_or_name);

struct RunOptions {
  std::filesystem::path out_dir = "mapof_out";
  bool plot = false;
};

/// Writes scenario.yaml, tuning.json, summary.json, optional plot.svg and per
/// run run_<i>/{trajectory.csv, switches.json, verify.json}.
int run_command(const ScenarioConfig& cfg, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Prints the tuning report; writes tuning.json into out_dir when given.
int tune_command(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& out_dir, std::ostream& out,
                 std::ostream& err);

/// Re-verifies a directory produced by run_command.
int verify_command(const std::filesystem::path& log_dir, std::ostream& out, std::ostream& err);

/// Lists built-ins; writes <name>.yaml into write_dir when given.
int list_scenarios_command(const std::optional<std::filesystem::path>& write_dir, std::ostream& out,
                           std::ostream& err);

}  // namespace mapof
