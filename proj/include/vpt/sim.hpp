#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vpt/camera_geometry.hpp"
#include "vpt/control.hpp"
#include "vpt/fuzzy.hpp"
#include "vpt/lane_detect.hpp"
#include "vpt/scene.hpp"

namespace vpt {

// Kinematic bicycle referenced at the rear axle.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, counter-clockwise from +y
  double speed = 0.0;    // m/s
  double steer = 0.0;    // front wheel, radians, positive left
  double wheelbase = 2.0;

  Pose pose() const { return {{x, y}, heading}; }
};

inline constexpr double kMaxIntegratorStep = 0.005;

// Applies the command immediately (no actuator lag) and integrates
//   x' = -v sin(psi), y' = v cos(psi), psi' = v tan(steer) / wheelbase
// with RK4 over equal sub-steps no longer than kMaxIntegratorStep.
VehicleState bicycle_step(const VehicleState& state, SteeringCommand cmd, double dt,
                          double max_steer_deg = kDefaultMaxSteerDeg);

// Signed distance from the rear axle to the centreline, positive when the
// vehicle is right of the travel direction.
double lateral_error(const VehicleState& state, const Track& track);

enum class ControllerKind { kFuzzyPid, kRawPid, kPurePursuit };

std::string to_string(ControllerKind kind);
ControllerKind controller_from_string(const std::string& name);

// PID input when fuzzification is bypassed: each error scaled by its input
// partition spacing.
double raw_cte(double eod_px, double eoa_deg);

struct Scenario {
  std::string name = "scenario";
  Track track = build_track({TrackSegment::straight(100.0)});
  CameraModel camera = default_camera();
  DetectorConfig detector;
  FuzzyController fuzzy = FuzzyController::standard();
  ControllerKind controller = ControllerKind::kFuzzyPid;
  PidGains gains{10.0, 10.0, 4.0};
  PurePursuitConfig pure_pursuit;
  double speed_mps = 20.0 / 3.6;
  double duration_s = 60.0;
  double dt = 0.05;
  double wheelbase_m = 2.0;
  double max_steer_deg = kDefaultMaxSteerDeg;
  // Open tracks finish this far before their end.
  double finish_margin_m = 8.0;
  SceneConditions conditions = SceneConditions::day();
  // When false proc_ms is recorded as 0 so traces are reproducible.
  bool measure_timing = true;

  // Throws ConfigError.
  void validate() const;
};

struct TraceRecord {
  std::uint64_t frame = 0;
  double t_s = 0.0;
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_rad = 0.0;
  double speed_mps = 0.0;
  double eod_px = 0.0;   // NaN when not measured
  double eoa_deg = 0.0;  // NaN when not measured
  double cte = 0.0;      // NaN when not measured
  double steer_deg = 0.0;
  double lat_err_m = 0.0;
  double proc_ms = 0.0;
};

struct RunSummary {
  double max_lat_err_m = 0.0;
  double mean_abs_lat_err_m = 0.0;
  double steering_variance_deg2 = 0.0;
  double mean_proc_ms = 0.0;
  bool completed = false;
};

// Throws EmptyTrace.
RunSummary summarize(const std::vector<TraceRecord>& trace, bool completed);

struct RunResult {
  std::vector<TraceRecord> trace;
  RunSummary summary;
};

// Invoked once per control step that renders a camera frame. `stages` is
// null for pure pursuit steps.
using FrameObserver =
    std::function<void(std::uint64_t frame, const Image& camera, const DetectionStages* stages)>;

// 20 Hz loop: render, detect, fuzzy or raw error, PID, integrate. Pure
// pursuit steers from the true pose and skips perception. Invalid
// detections hold the previous command. Ends at the finish, at the
// duration limit, or on leaving the lane.
RunResult run_closed_loop(const Scenario& scenario, const FrameObserver& observer = {});

}  // namespace vpt
