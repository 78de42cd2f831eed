#pragma once

#include "vpt/pose.hpp"
#include "vpt/scene.hpp"

namespace vpt {

// Steering angles are front-wheel angles in degrees, positive to the left.
inline constexpr double kDefaultMaxSteerDeg = 30.0;

struct SteeringCommand {
  double angle_deg = 0.0;
};

double clamp_steer(double angle_deg, double max_steer_deg = kDefaultMaxSteerDeg);

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;

  void validate() const;
  friend bool operator==(const PidGains&, const PidGains&) = default;
};

struct PidState {
  double cte_n1 = 0.0;  // cte[n-1]
  double cte_n2 = 0.0;  // cte[n-2]
  bool initialized = false;
};

struct PidOutput {
  SteeringCommand command;  // clamped
  double raw_deg = 0.0;     // before the clamp
};

// Incremental-form PID over the cross-track error:
//   p = cte - cte[n-1], i = cte, d = cte - 2 cte[n-1] + cte[n-2]
//   steering = -(kp p + ki i + kd d)
PidOutput pid_step(const PidGains& gains, PidState& state, double cte,
                   double max_steer_deg = kDefaultMaxSteerDeg);

void pid_reset(PidState& state);

struct PurePursuitConfig {
  double lookahead_m = 8.0;
  double wheelbase_m = 2.0;
  double max_steer_deg = kDefaultMaxSteerDeg;

  void validate() const;
};

// Steering for a goal at `bearing` (radians, positive left) one look-ahead
// distance away: curvature 2 sin(bearing) / L_d through the bicycle model.
SteeringCommand pure_pursuit_steering(const PurePursuitConfig& cfg, double bearing);

// Goal point at s_nearest + L_d along the track from the rear axle. Closed
// tracks wrap; throws NoGoalPoint when an open track ends before the goal.
SteeringCommand pure_pursuit_step(const PurePursuitConfig& cfg, const Pose& rear_axle,
                                  const Track& track);

}  // namespace vpt
