#include "vpt/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "vpt/errors.hpp"

namespace vpt {

namespace {

struct Deriv {
  double dx;
  double dy;
  double dpsi;
};

Deriv bicycle_rates(double heading, double speed, double yaw_rate) {
  return {-speed * std::sin(heading), speed * std::cos(heading), yaw_rate};
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

VehicleState bicycle_step(const VehicleState& state, SteeringCommand cmd, double dt,
                          double max_steer_deg) {
  if (!(dt > 0.0)) {
    throw InvalidArgument("time step must be positive");
  }
  if (!(state.wheelbase > 0.0)) {
    throw InvalidArgument("wheelbase must be positive");
  }
  VehicleState next = state;
  next.steer = deg2rad(clamp_steer(cmd.angle_deg, max_steer_deg));
  const double yaw_rate = state.speed * std::tan(next.steer) / state.wheelbase;
  const auto steps = static_cast<int>(std::ceil(dt / kMaxIntegratorStep - 1e-9));
  const double h = dt / steps;
  for (int i = 0; i < steps; ++i) {
    const Deriv k1 = bicycle_rates(next.heading, next.speed, yaw_rate);
    const Deriv k2 = bicycle_rates(next.heading + 0.5 * h * k1.dpsi, next.speed, yaw_rate);
    const Deriv k3 = bicycle_rates(next.heading + 0.5 * h * k2.dpsi, next.speed, yaw_rate);
    const Deriv k4 = bicycle_rates(next.heading + h * k3.dpsi, next.speed, yaw_rate);
    next.x += h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    next.y += h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    next.heading += h / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
  }
  return next;
}

double lateral_error(const VehicleState& state, const Track& track) {
  return track.nearest({state.x, state.y}).offset;
}

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kFuzzyPid:
      return "fuzzy-pid";
    case ControllerKind::kRawPid:
      return "raw-pid";
    case ControllerKind::kPurePursuit:
      return "pure-pursuit";
  }
  return "unknown";
}

ControllerKind controller_from_string(const std::string& name) {
  if (name == "fuzzy-pid") return ControllerKind::kFuzzyPid;
  if (name == "raw-pid") return ControllerKind::kRawPid;
  if (name == "pure-pursuit") return ControllerKind::kPurePursuit;
  throw ConfigError("unknown controller '" + name + "'");
}

double raw_cte(double eod_px, double eoa_deg) { return eod_px / 40.0 + eoa_deg / 10.0; }

void Scenario::validate() const {
  if (!(speed_mps > 0.0) || !(duration_s > 0.0) || !(dt > 0.0)) {
    throw ConfigError("speed, duration and time step must be positive");
  }
  if (!(wheelbase_m > 0.0) || !(max_steer_deg > 0.0)) {
    throw ConfigError("wheelbase and steering limit must be positive");
  }
  if (!(finish_margin_m >= 0.0)) {
    throw ConfigError("finish margin must be non-negative");
  }
  try {
    camera.validate();
    detector.validate();
    if (controller == ControllerKind::kPurePursuit) {
      pure_pursuit.validate();
    } else {
      gains.validate();
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (controller == ControllerKind::kPurePursuit && !track.closed() &&
      finish_margin_m < pure_pursuit.lookahead_m) {
    throw ConfigError("finish margin must cover the pure pursuit look-ahead on open tracks");
  }
  if (!track.closed() && finish_margin_m >= track.total_length()) {
    throw ConfigError("finish margin exceeds the track length");
  }
}

RunSummary summarize(const std::vector<TraceRecord>& trace, bool completed) {
  if (trace.empty()) {
    throw EmptyTrace("cannot summarise an empty trace");
  }
  RunSummary s;
  s.completed = completed;
  double abs_sum = 0.0;
  double steer_sum = 0.0;
  double proc_sum = 0.0;
  for (const TraceRecord& r : trace) {
    const double a = std::abs(r.lat_err_m);
    s.max_lat_err_m = std::max(s.max_lat_err_m, a);
    abs_sum += a;
    steer_sum += r.steer_deg;
    proc_sum += r.proc_ms;
  }
  const double n = static_cast<double>(trace.size());
  s.mean_abs_lat_err_m = abs_sum / n;
  s.mean_proc_ms = proc_sum / n;
  if (trace.size() > 1) {
    const double mean = steer_sum / n;
    double ss = 0.0;
    for (const TraceRecord& r : trace) {
      ss += (r.steer_deg - mean) * (r.steer_deg - mean);
    }
    s.steering_variance_deg2 = ss / (n - 1.0);
  }
  return s;
}

RunResult run_closed_loop(const Scenario& sc, const FrameObserver& observer) {
  sc.validate();
  const bool vision = sc.controller != ControllerKind::kPurePursuit;
  const Renderer renderer(sc.camera);
  const LaneDetector detector(sc.camera, sc.detector);
  PurePursuitConfig pp = sc.pure_pursuit;
  pp.wheelbase_m = sc.wheelbase_m;
  pp.max_steer_deg = sc.max_steer_deg;

  VehicleState vehicle;
  vehicle.x = sc.track.start().position.x;
  vehicle.y = sc.track.start().position.y;
  vehicle.heading = sc.track.start().heading;
  vehicle.speed = sc.speed_mps;
  vehicle.wheelbase = sc.wheelbase_m;

  const Track& track = sc.track;
  const double lane_limit = track.style().lane_half_width;
  const double total = track.total_length();
  double last_s = track.nearest(vehicle.pose().position).s;
  double progress = 0.0;

  PidState pid;
  WindowState windows;
  SteeringCommand command;
  double last_cte = kNaN;

  RunResult result;
  bool completed = false;
  const auto max_frames = static_cast<std::uint64_t>(std::ceil(sc.duration_s / sc.dt - 1e-9));
  for (std::uint64_t frame = 0; frame <= max_frames; ++frame) {
    const TrackProjection proj = track.nearest(vehicle.pose().position);
    double ds = proj.s - last_s;
    if (track.closed()) {
      ds = std::remainder(ds, total);
    }
    progress += ds;
    last_s = proj.s;
    const bool finished = track.closed() ? progress >= total
                                         : proj.s >= total - sc.finish_margin_m;
    if (finished) {
      completed = true;
      break;
    }
    if (frame == max_frames) {
      break;
    }

    TraceRecord rec;
    rec.frame = frame;
    rec.t_s = static_cast<double>(frame) * sc.dt;
    rec.x_m = vehicle.x;
    rec.y_m = vehicle.y;
    rec.heading_rad = vehicle.heading;
    rec.speed_mps = vehicle.speed;
    rec.lat_err_m = proj.offset;
    rec.eod_px = kNaN;
    rec.eoa_deg = kNaN;
    rec.cte = kNaN;

    if (vision) {
      const Image camera = renderer.render(vehicle.pose(), track, sc.conditions, frame);
      DetectionStages stages;
      const auto t0 = std::chrono::steady_clock::now();
      const LaneEstimate est = detector.detect(camera, windows, observer ? &stages : nullptr);
      if (est.valid) {
        last_cte = sc.controller == ControllerKind::kFuzzyPid
                       ? sc.fuzzy.evaluate(est.eod_px, est.eoa_deg)
                       : raw_cte(est.eod_px, est.eoa_deg);
        command = pid_step(sc.gains, pid, last_cte, sc.max_steer_deg).command;
        rec.eod_px = est.eod_px;
        rec.eoa_deg = est.eoa_deg;
        rec.cte = last_cte;
      }
      const auto t1 = std::chrono::steady_clock::now();
      if (sc.measure_timing) {
        rec.proc_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
      if (observer) {
        observer(frame, camera, &stages);
      }
    } else {
      if (observer) {
        observer(frame, renderer.render(vehicle.pose(), track, sc.conditions, frame), nullptr);
      }
      const auto t0 = std::chrono::steady_clock::now();
      command = pure_pursuit_step(pp, vehicle.pose(), track);
      const auto t1 = std::chrono::steady_clock::now();
      if (sc.measure_timing) {
        rec.proc_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
    }
    rec.steer_deg = command.angle_deg;
    result.trace.push_back(rec);

    if (std::abs(proj.offset) > lane_limit) {
      break;
    }
    vehicle = bicycle_step(vehicle, command, sc.dt, sc.max_steer_deg);
  }

  if (result.trace.empty()) {
    throw ConfigError("scenario finished before the first control step");
  }
  result.summary = summarize(result.trace, completed);
  return result;
}

}  // namespace vpt
