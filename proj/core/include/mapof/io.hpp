#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapof/dynamics.hpp"
#include "mapof/scenario.hpp"
#include "mapof/tuning.hpp"
#include "mapof/verify.hpp"

namespace mapof {

/// Fixed header of trajectory.csv.
inline constexpr const char* kTrajectoryHeader = "t,xi_x,xi_y,v_x,v_y,sigma_s,sigma,active_obstacle";

/// One row per sample; reals in shortest round-trip form. active_obstacle is
/// -1, an index, or '+'-joined indices when obstacles were merged.
void write_trajectory_csv(std::ostream& out, const SimLog& log);
void write_trajectory_csv(const std::filesystem::path& path, const SimLog& log);

/// Samples only; events are rebuilt from the sigma column. Throws Error on malformed input.
SimLog read_trajectory_csv(std::istream& in);
SimLog read_trajectory_csv(const std::filesystem::path& path);

/// Switch events implied by consecutive sigma values.
std::vector<SwitchEvent> events_from_samples(const std::vector<Sample>& samples);

nlohmann::json to_json(const std::vector<SwitchEvent>& events);
std::vector<SwitchEvent> events_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TuningReport& report);
nlohmann::json to_json(const VerifyReport& report);

/// Trajectories over the obstacle field with security and detection circles
/// and a marker at every switch.
std::string render_svg(const ScenarioConfig& cfg, const std::vector<SimLog>& logs);

void write_text(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace mapof
