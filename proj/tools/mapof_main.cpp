#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mapof/commands.hpp"
#include "mapof/errors.hpp"

namespace {

int with_scenario(const std::string& name, auto&& fn) {
  try {
    return fn(mapof::resolve_scenario(name));
  } catch (const mapof::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return mapof::kExitConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAPOF switched potential-field collision avoidance"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "mapof_out";
  bool plot = false;
  auto* run = app.add_subcommand("run", "Simulate a scenario and verify every run");
  run->add_option("config", config, "Scenario file or built-in name")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_flag("--plot", plot, "Also write plot.svg");

  std::string tune_config;
  std::string tune_out;
  auto* tune = app.add_subcommand("tune", "Print eigenrates, offsets and dwell-times");
  tune->add_option("config", tune_config, "Scenario file or built-in name")->required();
  tune->add_option("--out", tune_out, "Directory for tuning.json");

  std::string log_dir;
  auto* verify = app.add_subcommand("verify", "Re-check a run directory");
  verify->add_option("log-dir", log_dir, "Directory written by 'run'")->required()->check(CLI::ExistingDirectory);

  std::string write_dir;
  auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");
  list->add_option("--write", write_dir, "Write each built-in as <name>.yaml into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mapof::kExitConfigError;
  }

  try {
    if (*run) {
      return with_scenario(config, [&](const mapof::ScenarioConfig& cfg) {
        return mapof::run_command(cfg, {.out_dir = out_dir, .plot = plot}, std::cout, std::cerr);
      });
    }
    if (*tune) {
      return with_scenario(tune_config, [&](const mapof::ScenarioConfig& cfg) {
        std::optional<std::filesystem::path> dir;
        if (!tune_out.empty()) dir = tune_out;
        return mapof::tune_command(cfg, dir, std::cout, std::cerr);
      });
    }
    if (*verify) return mapof::verify_command(log_dir, std::cout, std::cerr);
    if (*list) {
      std::optional<std::filesystem::path> dir;
      if (!write_dir.empty()) dir = write_dir;
      return mapof::list_scenarios_command(dir, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mapof::kExitSimulationFailure;
  }
  return mapof::kExitOk;
}
