#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vpt/scene.hpp"
#include "vpt/sim.hpp"

namespace vpt {

// Optional camera overrides; angles in degrees.
struct CameraOverrides {
  std::optional<double> height_m;
  std::optional<double> pitch_deg;
  std::optional<double> yaw_deg;
  std::optional<double> hfov_deg;
  std::optional<double> vfov_deg;
  std::optional<double> lateral_m;
  std::optional<double> longitudinal_m;

  friend bool operator==(const CameraOverrides&, const CameraOverrides&) = default;
};

enum class Lighting { kDay, kNight };

// File-level description of one experiment. Angles are degrees here and
// radians everywhere past to_scenario().
struct ScenarioConfig {
  std::string name;
  std::vector<TrackSegment> track;
  CameraOverrides camera;
  ControllerKind controller = ControllerKind::kFuzzyPid;
  PidGains gains;
  double lookahead_m = 8.0;
  double speed_kmh = 20.0;
  double duration_s = 60.0;
  Lighting conditions = Lighting::kDay;
  std::uint64_t seed = 1;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

const std::vector<std::string>& preset_names();

// Throws UnknownPreset.
ScenarioConfig preset(const std::string& name);

// Throws ConfigError on malformed JSON, unknown keys or bad values.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ScenarioConfig& cfg);

// Throws ConfigError.
Scenario to_scenario(const ScenarioConfig& cfg);

inline constexpr const char* kCsvHeader =
    "frame,t_s,x_m,y_m,heading_rad,speed_mps,eod_px,eoa_deg,cte,steer_deg,lat_err_m,proc_ms";

// One row per record, six significant digits, LF endings.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);

std::string format_summary(const std::string& name, const RunSummary& summary);

}  // namespace vpt
