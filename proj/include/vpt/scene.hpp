#pragma once

#include <cstdint>
#include <vector>

#include "vpt/camera_geometry.hpp"
#include "vpt/image.hpp"
#include "vpt/pose.hpp"

namespace vpt {

struct TrackSegment {
  enum class Kind { kStraight, kArc };

  Kind kind = Kind::kStraight;
  double length = 0.0;  // straight only
  double radius = 0.0;  // arc only
  double sweep = 0.0;   // arc only, radians, positive turns left

  static TrackSegment straight(double length) { return {Kind::kStraight, length, 0.0, 0.0}; }
  static TrackSegment arc(double radius, double sweep) { return {Kind::kArc, 0.0, radius, sweep}; }

  double arc_length() const { return kind == Kind::kStraight ? length : radius * std::abs(sweep); }

  friend bool operator==(const TrackSegment&, const TrackSegment&) = default;
};

struct TrackStyle {
  double marker_width = 0.15;
  double lane_half_width = 1.75;
  Rgb marker_color{255, 220, 40};
  Rgb boundary_color{245, 245, 245};
  Rgb road_color{90, 90, 90};
  Rgb off_road_color{40, 60, 40};
  Rgb sky_color{140, 180, 220};
};

// Nearest centreline point for a query position.
struct TrackProjection {
  double s = 0.0;         // arc length of the nearest point
  double distance = 0.0;  // unsigned distance to the centreline
  double offset = 0.0;    // signed; positive right of the travel direction
  Pose pose;              // centreline pose at s
};

class Track {
 public:
  const std::vector<TrackSegment>& segments() const { return segments_; }
  const TrackStyle& style() const { return style_; }
  const Pose& start() const { return start_; }

  double total_length() const { return total_length_; }
  // End pose coincides with the start pose.
  bool closed() const { return closed_; }

  // Arc-length parameterisation. Closed tracks wrap, open tracks clamp.
  Pose point_at(double s) const;
  TrackProjection nearest(Vec2 q) const;
  // Unsigned centreline distance when it is at most `cap`, otherwise some
  // value greater than `cap`. Segments whose bounds lie beyond the cap are
  // skipped.
  double distance_within(Vec2 q, double cap) const;

 private:
  friend Track build_track(std::vector<TrackSegment>, TrackStyle, Pose);

  struct Placed {
    TrackSegment seg;
    Pose start;
    double s0 = 0.0;
    Vec2 center;      // arcs
    double side = 0;  // +1 left turn, -1 right turn
    Vec2 bound_center;
    double bound_radius = 0.0;
    Vec2 end;
    Vec2 direction;  // straights
  };

  Pose local_pose(const Placed& p, double ds) const;
  TrackProjection project(const Placed& p, Vec2 q) const;
  static double segment_distance(const Placed& p, Vec2 q);

  std::vector<TrackSegment> segments_;
  std::vector<Placed> placed_;
  TrackStyle style_;
  Pose start_;
  double total_length_ = 0.0;
  bool closed_ = false;
};

// Throws InvalidSegment for an empty list, non-positive dimensions or a
// style whose lane is narrower than its marker.
Track build_track(std::vector<TrackSegment> segments, TrackStyle style = {}, Pose start = {});

// Ground texture: centre marker, boundary lines at +-lane_half_width, road,
// off-road.
Rgb sample_world(const Track& track, Vec2 world);

struct SceneConditions {
  double ambient_gain = 1.0;
  bool headlight_enabled = false;
  double headlight_range = 10.0;               // metres at full gain
  double headlight_half_angle = deg2rad(40.0);  // beam cone
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;

  static SceneConditions day(std::uint64_t seed = 0);
  static SceneConditions night(std::uint64_t seed = 0);
};

// Synthetic camera. The per-pixel ground rays are fixed by the camera so
// they are computed once; each frame only places them in the world.
class Renderer {
 public:
  explicit Renderer(const CameraModel& cam);

  const CameraModel& camera() const { return cam_; }

  // Pure function of its arguments. vehicle_pose is the pose of the
  // camera's ground frame origin in the world.
  Image render(const Pose& vehicle_pose, const Track& track, const SceneConditions& cond,
               std::uint64_t frame_index) const;

 private:
  CameraModel cam_;
  std::vector<GroundPoint> ground_;  // per pixel, vehicle frame
  std::vector<std::uint8_t> is_ground_;
};

Image render_frame(const CameraModel& cam, const Pose& vehicle_pose, const Track& track,
                   const SceneConditions& cond, std::uint64_t frame_index = 0);

}  // namespace vpt
