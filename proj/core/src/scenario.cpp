#include "mapof/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mapof/errors.hpp"

namespace mapof {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // Keep the scalar recognizably floating point.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string fmt_vec(const Vec2& v) { return "[" + fmt_double(v.x) + ", " + fmt_double(v.y) + "]"; }

void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!map.IsMap()) throw ConfigError(std::string(where) + " must be a mapping", line_of(map));
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(where), line_of(kv.first));
  }
}

double get_double(const YAML::Node& n, std::string_view what) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(std::string(what) + " must be a number", line_of(n));
  }
}

Vec2 get_vec(const YAML::Node& n, std::string_view what) {
  if (!n.IsSequence() || n.size() != 2) {
    throw ConfigError(std::string(what) + " must be a two-element list [x, y]", line_of(n));
  }
  return {get_double(n[0], what), get_double(n[1], what)};
}

std::vector<Vec2> get_vec_list(const YAML::Node& n, std::string_view what) {
  if (!n.IsSequence()) throw ConfigError(std::string(what) + " must be a list of [x, y] pairs", line_of(n));
  std::vector<Vec2> out;
  for (const auto& item : n) out.push_back(get_vec(item, what));
  return out;
}

void read_double(const YAML::Node& map, const char* key, double& dst) {
  if (const auto n = map[key]) dst = get_double(n, key);
}

DwellPolicy parse_policy(const YAML::Node& n) {
  const auto s = n.as<std::string>();
  if (s == "theorem") return DwellPolicy::Theorem;
  if (s == "corollary") return DwellPolicy::Corollary;
  throw ConfigError("dwell.policy must be 'theorem' or 'corollary', got '" + s + "'", line_of(n));
}

ScenarioConfig from_yaml(const YAML::Node& root) {
  if (!root.IsMap()) throw ConfigError("scenario file must be a mapping", line_of(root));
  check_keys(root,
             {"name", "target", "obstacles", "initial_position", "initial_positions", "initial_velocity", "geometry",
              "gains", "dwell", "sim", "highlighted_run"},
             "scenario");

  ScenarioConfig cfg;
  if (const auto n = root["name"]) cfg.name = n.as<std::string>();
  if (!root["target"]) throw ConfigError("missing required key 'target'");
  cfg.target = get_vec(root["target"], "target");
  if (const auto n = root["obstacles"]) cfg.obstacles = get_vec_list(n, "obstacles");

  if (root["initial_position"] && root["initial_positions"]) {
    throw ConfigError("give either initial_position or initial_positions, not both", line_of(root["initial_position"]));
  }
  if (const auto n = root["initial_position"]) cfg.initial_positions = {get_vec(n, "initial_position")};
  if (const auto n = root["initial_positions"]) cfg.initial_positions = get_vec_list(n, "initial_positions");
  if (const auto n = root["initial_velocity"]) cfg.initial_velocity = get_vec(n, "initial_velocity");

  if (const auto g = root["geometry"]) {
    check_keys(g, {"r_m", "r_d", "d_g"}, "geometry");
    read_double(g, "r_m", cfg.r_m);
    read_double(g, "r_d", cfg.r_d);
    read_double(g, "d_g", cfg.d_g);
  }

  const auto gains = root["gains"];
  if (!gains) throw ConfigError("missing required key 'gains'");
  check_keys(gains, {"k_eta", "k_g", "k_zeta", "k_d"}, "gains");
  for (const char* k : {"k_eta", "k_g", "k_zeta", "k_d"}) {
    if (!gains[k]) throw ConfigError(std::string("gains.") + k + " is required", line_of(gains));
  }
  read_double(gains, "k_eta", cfg.gains.k_eta);
  read_double(gains, "k_g", cfg.gains.k_g);
  read_double(gains, "k_zeta", cfg.gains.k_zeta);
  read_double(gains, "k_d", cfg.gains.k_d);

  if (const auto d = root["dwell"]) {
    check_keys(d, {"policy", "mode", "T_D1", "T_D2", "rho", "mu_min", "a_override"}, "dwell");
    if (const auto n = d["policy"]) cfg.dwell.policy = parse_policy(n);
    if (const auto n = d["mode"]) {
      const auto s = n.as<std::string>();
      if (s == "explicit") {
        cfg.dwell.kind = DwellConfig::Kind::Explicit;
      } else if (s == "auto") {
        cfg.dwell.kind = DwellConfig::Kind::Auto;
      } else {
        throw ConfigError("dwell.mode must be 'explicit' or 'auto', got '" + s + "'", line_of(n));
      }
    }
    if (cfg.dwell.kind == DwellConfig::Kind::Explicit && (!d["T_D1"] || !d["T_D2"])) {
      throw ConfigError("explicit dwell mode needs T_D1 and T_D2", line_of(d));
    }
    read_double(d, "T_D1", cfg.dwell.t_d1);
    read_double(d, "T_D2", cfg.dwell.t_d2);
    read_double(d, "rho", cfg.dwell.rho);
    read_double(d, "mu_min", cfg.dwell.mu_min);
    if (const auto n = d["a_override"]) cfg.dwell.a_override = get_double(n, "a_override");
  }

  if (const auto s = root["sim"]) {
    check_keys(s, {"dt", "t_max", "eps_goal", "eps_vel", "eps_collision"}, "sim");
    read_double(s, "dt", cfg.sim.dt);
    read_double(s, "t_max", cfg.sim.t_max);
    read_double(s, "eps_goal", cfg.sim.eps_goal);
    read_double(s, "eps_vel", cfg.sim.eps_vel);
    read_double(s, "eps_collision", cfg.sim.eps_collision);
  }
  if (const auto n = root["highlighted_run"]) {
    const double v = get_double(n, "highlighted_run");
    if (v < 0.0 || v != std::floor(v)) throw ConfigError("highlighted_run must be a run index", line_of(n));
    cfg.highlighted_run = static_cast<std::size_t>(v);
  }
  return cfg;
}

}  // namespace

std::string_view policy_name(DwellPolicy p) { return p == DwellPolicy::Theorem ? "theorem" : "corollary"; }

std::vector<std::string> validate(const ScenarioConfig& cfg) {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!is_finite(cfg.target)) throw ConfigError("target must be finite");
  if (!(cfg.r_m > 0.0)) throw ConfigError("r_m must be positive");
  if (!(cfg.r_d > cfg.r_m)) throw ConfigError("r_d must exceed r_m");
  if (!(cfg.d_g > cfg.r_m)) throw ConfigError("d_g must exceed r_m");
  if (!cfg.gains.valid()) throw ConfigError("all gains must be strictly positive");
  if (cfg.initial_positions.empty()) throw ConfigError("at least one initial position is required");
  for (const auto& p : cfg.initial_positions) {
    if (!is_finite(p)) throw ConfigError("initial positions must be finite");
  }
  if (!is_finite(cfg.initial_velocity)) throw ConfigError("initial velocity must be finite");
  for (std::size_t j = 0; j < cfg.obstacles.size(); ++j) {
    if (!is_finite(cfg.obstacles[j])) throw ConfigError("obstacle positions must be finite");
    if (!(distance(cfg.target, cfg.obstacles[j]) > cfg.r_m)) {
      throw ConfigError("target lies inside the security zone of obstacle " + std::to_string(j));
    }
  }
  if (cfg.dwell.kind == DwellConfig::Kind::Explicit) {
    if (!(cfg.dwell.t_d1 >= 0.0) || !(cfg.dwell.t_d2 > cfg.dwell.t_d1)) {
      throw ConfigError("explicit dwell-times need T_D2 > T_D1 >= 0");
    }
  }
  if (!(cfg.dwell.rho > 0.0)) throw ConfigError("rho must be positive");
  if (!(cfg.dwell.mu_min > 0.0) || !(cfg.dwell.mu_min < cfg.r_m)) throw ConfigError("mu_min must lie in (0, r_m)");
  if (cfg.dwell.a_override && !(finite(*cfg.dwell.a_override) && *cfg.dwell.a_override >= 0.0)) {
    throw ConfigError("a_override must be a non-negative number");
  }
  const auto& s = cfg.sim;
  if (!(s.dt > 0.0)) throw ConfigError("sim.dt must be positive");
  if (!(s.t_max > 0.0)) throw ConfigError("sim.t_max must be positive");
  if (!(s.eps_goal > 0.0) || !(s.eps_vel > 0.0) || !(s.eps_collision > 0.0)) {
    throw ConfigError("termination thresholds must be positive");
  }
  if (cfg.highlighted_run && *cfg.highlighted_run >= cfg.initial_positions.size()) {
    throw ConfigError("highlighted_run is out of range");
  }

  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < cfg.obstacles.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.obstacles.size(); ++j) {
      const double d = distance(cfg.obstacles[i], cfg.obstacles[j]);
      std::ostringstream w;
      if (d < cfg.r_d) {
        w << "obstacles " << i << " and " << j << " are " << d << " m apart (< r_d); they will be merged";
      } else if (d < cfg.r_m + cfg.r_d) {
        w << "obstacles " << i << " and " << j << " are " << d << " m apart (< r_m + r_d)";
      }
      if (!w.str().empty()) warnings.push_back(w.str());
    }
    if (!(distance(cfg.target, cfg.obstacles[i]) > cfg.r_d)) {
      warnings.push_back("obstacle " + std::to_string(i) + " lies within r_d of the target");
    }
  }
  return warnings;
}

ScenarioConfig parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  ScenarioConfig cfg;
  try {
    cfg = from_yaml(root);
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.msg, e.mark.is_null() ? std::nullopt : std::optional<int>(e.mark.line + 1));
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const ScenarioConfig& cfg) {
  std::ostringstream out;
  if (!cfg.name.empty()) out << "name: " << cfg.name << "\n";
  out << "target: " << fmt_vec(cfg.target) << "\n";
  out << "obstacles:" << (cfg.obstacles.empty() ? " []" : "") << "\n";
  for (const auto& o : cfg.obstacles) out << "  - " << fmt_vec(o) << "\n";
  out << "initial_positions:\n";
  for (const auto& p : cfg.initial_positions) out << "  - " << fmt_vec(p) << "\n";
  out << "initial_velocity: " << fmt_vec(cfg.initial_velocity) << "\n";
  out << "geometry:\n"
      << "  r_m: " << fmt_double(cfg.r_m) << "\n"
      << "  r_d: " << fmt_double(cfg.r_d) << "\n"
      << "  d_g: " << fmt_double(cfg.d_g) << "\n";
  out << "gains:\n"
      << "  k_eta: " << fmt_double(cfg.gains.k_eta) << "\n"
      << "  k_g: " << fmt_double(cfg.gains.k_g) << "\n"
      << "  k_zeta: " << fmt_double(cfg.gains.k_zeta) << "\n"
      << "  k_d: " << fmt_double(cfg.gains.k_d) << "\n";
  out << "dwell:\n"
      << "  policy: " << policy_name(cfg.dwell.policy) << "\n"
      << "  mode: " << (cfg.dwell.kind == DwellConfig::Kind::Explicit ? "explicit" : "auto") << "\n";
  // Auto mode ignores T_D1/T_D2 but keeps them so a reload is value-identical.
  if (cfg.dwell.kind == DwellConfig::Kind::Explicit || cfg.dwell.t_d1 != 0.0 || cfg.dwell.t_d2 != 0.0) {
    out << "  T_D1: " << fmt_double(cfg.dwell.t_d1) << "\n"
        << "  T_D2: " << fmt_double(cfg.dwell.t_d2) << "\n";
  }
  out << "  rho: " << fmt_double(cfg.dwell.rho) << "\n"
      << "  mu_min: " << fmt_double(cfg.dwell.mu_min) << "\n";
  if (cfg.dwell.a_override) out << "  a_override: " << fmt_double(*cfg.dwell.a_override) << "\n";
  out << "sim:\n"
      << "  dt: " << fmt_double(cfg.sim.dt) << "\n"
      << "  t_max: " << fmt_double(cfg.sim.t_max) << "\n"
      << "  eps_goal: " << fmt_double(cfg.sim.eps_goal) << "\n"
      << "  eps_vel: " << fmt_double(cfg.sim.eps_vel) << "\n"
      << "  eps_collision: " << fmt_double(cfg.sim.eps_collision) << "\n";
  if (cfg.highlighted_run) out << "highlighted_run: " << *cfg.highlighted_run << "\n";
  return out.str();
}

void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << dump_scenario(cfg);
}

std::vector<ScenarioConfig> builtin_scenarios() {
  const Gains gains{3.77, 1.90, 20.0, 4.37};

  ScenarioConfig s1;
  s1.name = "scenario1";
  s1.target = {18.0, -1.0};
  s1.obstacles = {{6.0, 0.0}};
  s1.initial_positions = {{-5.0, 2.0}};
  s1.gains = gains;
  s1.dwell.policy = DwellPolicy::Theorem;
  s1.dwell.kind = DwellConfig::Kind::Explicit;
  s1.dwell.t_d1 = 1.60;
  s1.dwell.t_d2 = 6.25;

  ScenarioConfig s2;
  s2.name = "scenario2";
  s2.target = {40.0, 2.0};
  s2.obstacles = {{6.0, 0.0}, {18.5, 3.5}, {30.0, -1.0}};
  // Eight starts left of the obstacle field, x = -5, y = -7..7 step 2.
  for (int y = -7; y <= 7; y += 2) s2.initial_positions.push_back({-5.0, static_cast<double>(y)});
  s2.gains = gains;
  s2.dwell.policy = DwellPolicy::Corollary;
  s2.dwell.kind = DwellConfig::Kind::Explicit;
  s2.dwell.t_d1 = 1.60;
  s2.dwell.t_d2 = 6.25;
  // y = 5: the start whose run switches eight times.
  s2.highlighted_run = 6;

  return {s1, s2};
}

std::optional<ScenarioConfig> find_builtin(std::string_view name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

TuningOptions tuning_options(const ScenarioConfig& cfg) {
  TuningOptions o;
  o.rho = cfg.dwell.rho;
  o.mu_min = cfg.dwell.mu_min;
  o.r_m = cfg.r_m;
  o.a_override = cfg.dwell.a_override;
  return o;
}

DwellPair resolve_dwell(const ScenarioConfig& cfg, const TuningReport& report) {
  if (cfg.dwell.kind == DwellConfig::Kind::Explicit) return {cfg.dwell.t_d1, cfg.dwell.t_d2};
  if (cfg.dwell.policy == DwellPolicy::Theorem) return {report.T_D1, report.T_D2_theorem};
  if (!report.T_D2_corollary) {
    throw ConfigError("relaxed dwell-time unavailable (needs rho < a); use the theorem policy or a smaller rho");
  }
  return {report.T_D1, *report.T_D2_corollary};
}

SimSetup make_setup(const ScenarioConfig& cfg, std::size_t run_index, const DwellPair& dwell) {
  SimSetup s;
  s.target = cfg.target;
  s.obstacles = cfg.obstacles;
  s.initial_position = cfg.initial_positions.at(run_index);
  s.initial_velocity = cfg.initial_velocity;
  s.r_m = cfg.r_m;
  s.r_d = cfg.r_d;
  s.d_g = cfg.d_g;
  s.gains = cfg.gains;
  s.policy = cfg.dwell.policy;
  s.t_d1 = dwell.t_d1;
  s.t_d2 = dwell.t_d2;
  s.options = cfg.sim;
  return s;
}

}  // namespace mapof
