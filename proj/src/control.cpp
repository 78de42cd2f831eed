#include "vpt/control.hpp"

#include <algorithm>
#include <cmath>

#include "vpt/errors.hpp"

namespace vpt {

double clamp_steer(double angle_deg, double max_steer_deg) {
  return std::clamp(angle_deg, -max_steer_deg, max_steer_deg);
}

void PidGains::validate() const {
  const bool ok = std::isfinite(kp) && std::isfinite(ki) && std::isfinite(kd) && kp >= 0.0 &&
                  ki >= 0.0 && kd >= 0.0;
  if (!ok) {
    throw InvalidArgument("PID gains must be finite and non-negative");
  }
}

PidOutput pid_step(const PidGains& gains, PidState& state, double cte, double max_steer_deg) {
  if (!state.initialized) {
    state.cte_n1 = 0.0;
    state.cte_n2 = 0.0;
    state.initialized = true;
  }
  const double p_error = cte - state.cte_n1;
  const double i_error = cte;
  const double d_error = cte - 2.0 * state.cte_n1 + state.cte_n2;
  state.cte_n2 = state.cte_n1;
  state.cte_n1 = cte;

  PidOutput out;
  out.raw_deg = -(gains.kp * p_error + gains.ki * i_error + gains.kd * d_error);
  out.command.angle_deg = clamp_steer(out.raw_deg, max_steer_deg);
  return out;
}

void pid_reset(PidState& state) { state = PidState{}; }

void PurePursuitConfig::validate() const {
  if (!(lookahead_m > 0.0) || !(wheelbase_m > 0.0) || !(max_steer_deg > 0.0)) {
    throw InvalidArgument("pure pursuit look-ahead, wheelbase and steer limit must be positive");
  }
}

SteeringCommand pure_pursuit_steering(const PurePursuitConfig& cfg, double bearing) {
  const double curvature = 2.0 * std::sin(bearing) / cfg.lookahead_m;
  return {clamp_steer(rad2deg(std::atan(cfg.wheelbase_m * curvature)), cfg.max_steer_deg)};
}

SteeringCommand pure_pursuit_step(const PurePursuitConfig& cfg, const Pose& rear_axle,
                                  const Track& track) {
  cfg.validate();
  const double s_goal = track.nearest(rear_axle.position).s + cfg.lookahead_m;
  if (!track.closed() && s_goal > track.total_length()) {
    throw NoGoalPoint("look-ahead point lies past the end of the track");
  }
  const Vec2 local = rear_axle.to_local(track.point_at(s_goal).position);
  // Local x points right; positive bearing is to the left.
  return pure_pursuit_steering(cfg, std::atan2(-local.x, local.y));
}

}  // namespace vpt
