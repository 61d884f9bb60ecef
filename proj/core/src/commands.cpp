#include "mapof/commands.hpp"

#include <algorithm>
#include <ostream>
#include <string_view>
#include <vector>

#include "mapof/errors.hpp"
#include "mapof/io.hpp"
#include "mapof/verify.hpp"

namespace mapof {

namespace fs = std::filesystem;

namespace {

std::string run_dir_name(std::size_t i) { return "run_" + std::to_string(i); }

void print_tuning(const TuningReport& r, std::ostream& out) {
  out << "alpha1 " << r.alpha1 << "\nalpha2 " << r.alpha2 << "\nalpha3 " << r.alpha3 << "\nalpha4 " << r.alpha4
      << "\nrepulsion positive eigenvalue " << r.alpha_plus_eig << '\n';
  for (int i = 0; i < 4; ++i) out << "a" << i + 1 << " " << r.modes[i].offset << '\n';
  out << "a (computed) " << r.a_computed << "\na (used) " << r.a << "\nalpha_minus " << r.alpha_minus
      << "\nalpha_plus " << r.alpha_plus << "\nrho " << r.rho << "\nT_t " << r.T_t << "  (positive eigenvalue: "
      << r.T_t_eig << ")\nT_D1 " << r.T_D1 << "\nT_D2 theorem " << r.T_D2_theorem << "  (positive eigenvalue: "
      << r.T_D2_theorem_eig << ")\n";
  if (r.T_D2_corollary) {
    out << "T_D2 relaxed " << *r.T_D2_corollary << "  (positive eigenvalue: " << *r.T_D2_corollary_eig << ")\n";
  }
  if (r.T_in) out << "T_in " << *r.T_in << '\n';
  for (const auto& n : r.notes) out << "note: " << n << '\n';
}

/// Named failure for a verified run, empty when it passed.
std::string verification_failure(const VerifyReport& v) {
  if (!v.dwell_ok()) return "DwellViolation";
  if (!v.bounds_ok()) return "BoundViolation";
  return {};
}

struct Verdict {
  int code = kExitOk;
  std::string failure;

  void merge(int c, std::string f) {
    // Simulation failures outrank verification failures.
    if (c == kExitOk) return;
    if (code == kExitOk || (code == kExitVerificationFailure && c == kExitSimulationFailure)) {
      code = c;
      failure = std::move(f);
    }
  }
};

nlohmann::json probes_json(const std::vector<ProbeResult>& probes) {
  auto arr = nlohmann::json::array();
  for (const auto& p : probes) {
    arr.push_back({{"name", p.name}, {"passed", p.passed}, {"metric", p.metric}, {"threshold", p.threshold}});
  }
  return arr;
}

}  // namespace

ScenarioConfig resolve_scenario(const std::string& config_or_name) {
  if (fs::exists(config_or_name)) return load_scenario(config_or_name);
  if (auto b = find_builtin(config_or_name)) return *b;
  throw ConfigError("no scenario file or built-in named '" + config_or_name + "'");
}

int run_command(const ScenarioConfig& cfg, const RunOptions& options, std::ostream& out, std::ostream& err) {
  TuningReport tuning;
  DwellPair dwell;
  try {
    for (const auto& w : validate(cfg)) err << "warning: " << w << '\n';
    tuning = tune(cfg.gains, tuning_options(cfg));
    dwell = resolve_dwell(cfg, tuning);
  } catch (const RepeatedEigenvalueError& e) {
    err << "config error: " << e.what() << "\nhint: perturb k_d so that k_d^2 differs from 4*k_eta and 4*k_g\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (cfg.dwell.kind == DwellConfig::Kind::Explicit) {
    for (auto& n : explain_dwell_times(tuning, dwell.t_d1, dwell.t_d2)) tuning.notes.push_back(std::move(n));
  }

  fs::create_directories(options.out_dir);
  save_scenario(cfg, options.out_dir / "scenario.yaml");
  write_text(options.out_dir / "tuning.json", to_json(tuning).dump(2) + "\n");

  // Virtual-target probes depend on the obstacle field only, so they run once.
  std::vector<ProbeResult> probes;
  std::string probe_error;
  try {
    probes = check_equilibrium_uniqueness(make_setup(cfg, 0, dwell));
  } catch (const HypothesisError& e) {
    probe_error = e.what();
  }

  Verdict verdict;
  std::vector<SimLog> logs;
  auto runs = nlohmann::json::array();
  out << "scenario " << cfg.name << ": " << cfg.initial_positions.size() << " run(s), policy "
      << policy_name(cfg.dwell.policy) << ", T_D1 " << dwell.t_d1 << " s, T_D2 " << dwell.t_d2 << " s\n";
  for (std::size_t i = 0; i < cfg.initial_positions.size(); ++i) {
    const SimSetup setup = make_setup(cfg, i, dwell);
    SimLog log = simulate(setup);
    VerifyReport v = verify_run(log, setup, tuning, {.r_s = 0.0, .run_probes = false});

    const fs::path dir = options.out_dir / run_dir_name(i);
    fs::create_directories(dir);
    write_trajectory_csv(dir / "trajectory.csv", log);
    write_text(dir / "switches.json", to_json(log.events).dump(2) + "\n");
    write_text(dir / "verify.json", to_json(v).dump(2) + "\n");

    const Sample& last = log.samples.back();
    const std::string fail = verification_failure(v);
    if (log.outcome != Outcome::ReachedGoal) verdict.merge(kExitSimulationFailure, std::string(outcome_name(log.outcome)));
    if (!fail.empty()) verdict.merge(kExitVerificationFailure, fail);

    out << "  run " << i << ": " << outcome_name(log.outcome) << " at t=" << last.t << " s, " << log.events.size()
        << " switch(es), min separation " << v.separation.min_separation << " m"
        << (fail.empty() ? "" : ", " + fail) << '\n';
    runs.push_back({{"index", i},
                    {"initial_position", {setup.initial_position.x, setup.initial_position.y}},
                    {"outcome", outcome_name(log.outcome)},
                    {"final_time", last.t},
                    {"final_position", {last.xi.x, last.xi.y}},
                    {"switch_count", log.events.size()},
                    {"min_separation", v.separation.min_separation},
                    {"verify_ok", v.ok()},
                    {"failure", fail.empty() ? nlohmann::json(nullptr) : nlohmann::json(fail)}});
    logs.push_back(std::move(log));
  }

  const bool probes_ok = probe_error.empty() && std::all_of(probes.begin(), probes.end(), [](const auto& p) { return p.passed; });
  if (!probes_ok) verdict.merge(kExitVerificationFailure, "EquilibriumProbeFailure");

  nlohmann::json summary;
  summary["scenario"] = cfg.name;
  summary["policy"] = policy_name(cfg.dwell.policy);
  summary["T_D1"] = dwell.t_d1;
  summary["T_D2"] = dwell.t_d2;
  summary["runs"] = runs;
  summary["equilibrium_probes"] = probes_json(probes);
  if (!probe_error.empty()) summary["equilibrium_probe_error"] = probe_error;
  summary["exit_code"] = verdict.code;
  summary["failure"] = verdict.failure.empty() ? nlohmann::json(nullptr) : nlohmann::json(verdict.failure);
  write_text(options.out_dir / "summary.json", summary.dump(2) + "\n");

  if (options.plot) write_text(options.out_dir / "plot.svg", render_svg(cfg, logs));

  if (!probe_error.empty()) out << "  equilibrium probes skipped: " << probe_error << '\n';
  for (const auto& p : probes) {
    if (!p.passed) out << "  probe " << p.name << " failed (" << p.metric << " vs " << p.threshold << ")\n";
  }
  if (verdict.code != kExitOk) err << "FAILED: " << verdict.failure << '\n';
  return verdict.code;
}

int tune_command(const ScenarioConfig& cfg, const std::optional<fs::path>& out_dir, std::ostream& out,
                 std::ostream& err) {
  TuningReport report;
  try {
    report = tune(cfg.gains, tuning_options(cfg));
  } catch (const RepeatedEigenvalueError& e) {
    err << "tuning error: " << e.what() << "\nhint: perturb k_d so that k_d^2 differs from 4*k_eta and 4*k_g\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << "tuning error: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (cfg.dwell.kind == DwellConfig::Kind::Explicit) {
    for (auto& n : explain_dwell_times(report, cfg.dwell.t_d1, cfg.dwell.t_d2)) report.notes.push_back(std::move(n));
  }
  print_tuning(report, out);
  if (out_dir) {
    fs::create_directories(*out_dir);
    write_text(*out_dir / "tuning.json", to_json(report).dump(2) + "\n");
  }
  return kExitOk;
}

int verify_command(const fs::path& log_dir, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  TuningReport tuning;
  DwellPair dwell;
  try {
    cfg = load_scenario(log_dir / "scenario.yaml");
    tuning = tune(cfg.gains, tuning_options(cfg));
    dwell = resolve_dwell(cfg, tuning);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  Verdict verdict;
  for (std::size_t i = 0; i < cfg.initial_positions.size(); ++i) {
    const fs::path dir = log_dir / run_dir_name(i);
    const SimSetup setup = make_setup(cfg, i, dwell);
    SimLog log;
    try {
      log = read_trajectory_csv(dir / "trajectory.csv");
      if (log.samples.empty()) throw Error("empty trajectory");
      if (fs::exists(dir / "switches.json")) {
        const auto recorded = events_from_json(read_json(dir / "switches.json"));
        const bool same = recorded.size() == log.events.size() &&
                          std::equal(recorded.begin(), recorded.end(), log.events.begin(), [](const auto& a, const auto& b) {
                            return a.t == b.t && a.from_mode == b.from_mode && a.to_mode == b.to_mode;
                          });
        if (!same) throw Error("switches.json disagrees with the sigma column");
      }
    } catch (const std::exception& e) {
      err << "run " << i << ": " << e.what() << '\n';
      verdict.merge(kExitVerificationFailure, "MalformedLog");
      continue;
    }
    log.outcome = terminal_outcome(log.samples.back(), setup);
    const VerifyReport v = verify_run(log, setup, tuning, {.r_s = 0.0, .run_probes = false});
    const std::string fail = verification_failure(v);
    if (log.outcome != Outcome::ReachedGoal) verdict.merge(kExitSimulationFailure, std::string(outcome_name(log.outcome)));
    if (!fail.empty()) verdict.merge(kExitVerificationFailure, fail);
    out << "run " << i << ": " << outcome_name(log.outcome) << ", " << v.dwell.violations.size()
        << " dwell violation(s), bound margin " << v.bound.min_margin() << ", min separation "
        << v.separation.min_separation << " m" << (fail.empty() ? "" : ", " + fail) << '\n';
  }
  if (verdict.code != kExitOk) err << "FAILED: " << verdict.failure << '\n';
  return verdict.code;
}

int list_scenarios_command(const std::optional<fs::path>& write_dir, std::ostream& out, std::ostream& err) {
  try {
    for (const auto& s : builtin_scenarios()) {
      out << s.name << ": " << s.obstacles.size() << " obstacle(s), " << s.initial_positions.size()
          << " initial position(s), policy " << policy_name(s.dwell.policy) << '\n';
      if (write_dir) {
        fs::create_directories(*write_dir);
        save_scenario(s, *write_dir / (s.name + ".yaml"));
      }
    }
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitOk;
}

}  // namespace mapof
