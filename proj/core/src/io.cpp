#include "mapof/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mapof/errors.hpp"

namespace mapof {

namespace {

void put_double(std::string& line, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t row) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error("trajectory row " + std::to_string(row) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string active_label(const std::vector<std::size_t>& active) {
  if (active.empty()) return "-1";
  std::string s;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (i) s += '+';
    s += std::to_string(active[i]);
  }
  return s;
}

nlohmann::json vec_json(const Vec2& v) { return nlohmann::json::array({v.x, v.y}); }

}  // namespace

void write_trajectory_csv(std::ostream& out, const SimLog& log) {
  out << kTrajectoryHeader << '\n';
  std::string line;
  for (const auto& s : log.samples) {
    line.clear();
    for (double v : {s.t, s.xi.x, s.xi.y, s.v.x, s.v.y}) {
      put_double(line, v);
      line += ',';
    }
    line += std::to_string(to_int(s.sigma_s));
    line += ',';
    line += std::to_string(to_int(s.sigma));
    line += ',';
    line += active_label(s.active);
    out << line << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const SimLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_trajectory_csv(out, log);
}

std::vector<SwitchEvent> events_from_samples(const std::vector<Sample>& samples) {
  std::vector<SwitchEvent> events;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].sigma != samples[i - 1].sigma) {
      events.push_back({samples[i].t, samples[i - 1].sigma, samples[i].sigma, samples[i].xi});
    }
  }
  return events;
}

SimLog read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw Error("trajectory file has an unexpected header");
  }
  SimLog log;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 8) throw Error("trajectory row " + std::to_string(row) + ": expected 8 columns");
    Sample s;
    s.t = parse_double(cols[0], row);
    s.xi = {parse_double(cols[1], row), parse_double(cols[2], row)};
    s.v = {parse_double(cols[3], row), parse_double(cols[4], row)};
    try {
      s.sigma_s = mode_from_int(static_cast<int>(parse_double(cols[5], row)));
      s.sigma = mode_from_int(static_cast<int>(parse_double(cols[6], row)));
    } catch (const std::invalid_argument& e) {
      throw Error("trajectory row " + std::to_string(row) + ": " + e.what());
    }
    if (cols[7] != "-1") {
      for (auto part : split(cols[7], '+')) {
        std::size_t idx = 0;
        const auto res = std::from_chars(part.data(), part.data() + part.size(), idx);
        if (res.ec != std::errc() || res.ptr != part.data() + part.size()) {
          throw Error("trajectory row " + std::to_string(row) + ": bad obstacle reference");
        }
        s.active.push_back(idx);
      }
    }
    if (!log.samples.empty() && !(s.t > log.samples.back().t)) {
      throw Error("trajectory row " + std::to_string(row) + ": time is not increasing");
    }
    log.samples.push_back(std::move(s));
  }
  log.events = events_from_samples(log.samples);
  return log;
}

SimLog read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_trajectory_csv(in);
}

nlohmann::json to_json(const std::vector<SwitchEvent>& events) {
  auto arr = nlohmann::json::array();
  for (const auto& e : events) {
    arr.push_back({{"t", e.t}, {"from", to_int(e.from_mode)}, {"to", to_int(e.to_mode)}, {"position", vec_json(e.position)}});
  }
  return arr;
}

std::vector<SwitchEvent> events_from_json(const nlohmann::json& j) {
  std::vector<SwitchEvent> events;
  for (const auto& e : j) {
    const auto& p = e.at("position");
    events.push_back({e.at("t").get<double>(), mode_from_int(e.at("from").get<int>()),
                      mode_from_int(e.at("to").get<int>()), {p.at(0).get<double>(), p.at(1).get<double>()}});
  }
  return events;
}

nlohmann::json to_json(const TuningReport& r) {
  nlohmann::json j;
  j["gains"] = {{"k_eta", r.gains.k_eta}, {"k_g", r.gains.k_g}, {"k_zeta", r.gains.k_zeta}, {"k_d", r.gains.k_d}};
  auto modes = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    modes.push_back({{"mode", i + 1}, {"alpha", r.modes[i].alpha}, {"a", r.modes[i].offset}});
  }
  j["modes"] = modes;
  j["alpha1"] = r.alpha1;
  j["alpha2"] = r.alpha2;
  j["alpha3"] = r.alpha3;
  j["alpha4"] = r.alpha4;
  j["alpha_plus_eig"] = r.alpha_plus_eig;
  j["a_computed"] = r.a_computed;
  j["a"] = r.a;
  j["alpha_minus"] = r.alpha_minus;
  j["alpha_plus"] = r.alpha_plus;
  j["rho"] = r.rho;
  j["mu_min"] = r.mu_min;
  j["r_m"] = r.r_m;
  j["T_t"] = r.T_t;
  j["T_t_eig"] = r.T_t_eig;
  j["T_D1"] = r.T_D1;
  j["T_D2_theorem"] = r.T_D2_theorem;
  j["T_D2_theorem_eig"] = r.T_D2_theorem_eig;
  j["T_D2_corollary"] = r.T_D2_corollary ? nlohmann::json(*r.T_D2_corollary) : nlohmann::json(nullptr);
  j["T_D2_corollary_eig"] = r.T_D2_corollary_eig ? nlohmann::json(*r.T_D2_corollary_eig) : nlohmann::json(nullptr);
  j["T_in"] = r.T_in ? nlohmann::json(*r.T_in) : nlohmann::json(nullptr);
  j["notes"] = r.notes;
  return j;
}

nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json j;
  auto dv = nlohmann::json::array();
  for (const auto& v : r.dwell.violations) {
    dv.push_back({{"event_index", v.event_index},
                  {"t", v.event.t},
                  {"from", to_int(v.event.from_mode)},
                  {"to", to_int(v.event.to_mode)},
                  {"gap", v.gap},
                  {"required", v.required}});
  }
  j["dwell"] = {{"violation_count", r.dwell.violations.size()}, {"violations", dv}};

  auto checks = nlohmann::json::array();
  for (const auto& c : r.bound.checks) {
    checks.push_back({{"k", c.k},
                      {"t", c.t},
                      {"norm_z", c.norm_z},
                      {"bound", c.bound},
                      {"margin", c.margin},
                      {"checkpoint", c.checkpoint}});
  }
  const double mm = r.bound.min_margin();
  j["switch_bound"] = {{"delta_sup", r.bound.delta_sup},
                       {"ok", r.bound.ok()},
                       {"min_margin", std::isfinite(mm) ? nlohmann::json(mm) : nlohmann::json(nullptr)},
                       {"checks", checks}};
  j["separation"] = {{"min_separation", r.separation.min_separation},
                     {"t_at_min", r.separation.t_at_min},
                     {"r_s", r.separation.r_s},
                     {"below_r_s", r.separation.below_r_s}};
  j["exp_bound_ok"] = r.exp_bound_ok;
  auto probes = nlohmann::json::array();
  for (const auto& p : r.probes) {
    probes.push_back({{"name", p.name}, {"passed", p.passed}, {"metric", p.metric}, {"threshold", p.threshold}});
  }
  j["equilibrium_probes"] = probes;
  if (!r.probe_error.empty()) j["equilibrium_probe_error"] = r.probe_error;
  j["ok"] = r.ok();
  return j;
}

std::string render_svg(const ScenarioConfig& cfg, const std::vector<SimLog>& logs) {
  double min_x = cfg.target.x, max_x = cfg.target.x, min_y = cfg.target.y, max_y = cfg.target.y;
  const auto grow = [&](const Vec2& p, double r) {
    min_x = std::min(min_x, p.x - r);
    max_x = std::max(max_x, p.x + r);
    min_y = std::min(min_y, p.y - r);
    max_y = std::max(max_y, p.y + r);
  };
  for (const auto& o : cfg.obstacles) grow(o, cfg.r_d);
  for (const auto& log : logs) {
    for (const auto& s : log.samples) grow(s.xi, 0.5);
  }
  const double scale = 20.0;  // px per metre
  const double w = (max_x - min_x) * scale;
  const double h = (max_y - min_y) * scale;
  // SVG y grows downwards.
  const auto px = [&](const Vec2& p) { return std::pair{(p.x - min_x) * scale, (max_y - p.y) * scale}; };

  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& o : cfg.obstacles) {
    const auto [cx, cy] = px(o);
    svg << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << cfg.r_d * scale
        << "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"6,4\"/>\n";
    svg << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << cfg.r_m * scale
        << "\" fill=\"#f4cccc\" stroke=\"#c00\"/>\n";
    svg << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"3\" fill=\"#c00\"/>\n";
  }
  static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                            "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    // Thin to roughly every 20 ms.
    const std::size_t stride = std::max<std::size_t>(1, logs[i].samples.size() / 2000);
    for (std::size_t k = 0; k < logs[i].samples.size(); k += stride) {
      const auto [x, y] = px(logs[i].samples[k].xi);
      svg << x << ',' << y << ' ';
    }
    if (!logs[i].samples.empty()) {
      const auto [x, y] = px(logs[i].samples.back().xi);
      svg << x << ',' << y;
    }
    svg << "\"/>\n";
    for (const auto& e : logs[i].events) {
      const auto [x, y] = px(e.position);
      svg << "<rect x=\"" << x - 3 << "\" y=\"" << y - 3 << "\" width=\"6\" height=\"6\" fill=\"" << color
          << "\"><title>t=" << e.t << " " << to_int(e.from_mode) << "-&gt;" << to_int(e.to_mode)
          << "</title></rect>\n";
    }
  }
  const auto [tx, ty] = px(cfg.target);
  svg << "<circle cx=\"" << tx << "\" cy=\"" << ty << "\" r=\"5\" fill=\"#2a2\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace mapof
