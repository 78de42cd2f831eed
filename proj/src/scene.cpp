#include "vpt/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "vpt/errors.hpp"

namespace vpt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr int kNormalTableBits = 16;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

const std::vector<double>& normal_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(std::size_t{1} << kNormalTableBits);
    std::mt19937_64 rng(0x5EEDu);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (double& v : t) {
      v = dist(rng);
    }
    return t;
  }();
  return table;
}

double positive_mod(double a, double m) {
  double r = std::fmod(a, m);
  if (r < 0.0) {
    r += m;
  }
  return r;
}

}  // namespace

Track build_track(std::vector<TrackSegment> segments, TrackStyle style, Pose start) {
  if (segments.empty()) {
    throw InvalidSegment("track needs at least one segment");
  }
  if (!(style.marker_width > 0.0) || !(style.lane_half_width > style.marker_width / 2.0)) {
    throw InvalidSegment("lane half width must exceed half the marker width");
  }
  Track track;
  track.style_ = style;
  track.start_ = start;
  Pose cursor = start;
  double s = 0.0;
  for (const TrackSegment& seg : segments) {
    Track::Placed placed;
    placed.seg = seg;
    placed.start = cursor;
    placed.s0 = s;
    if (seg.kind == TrackSegment::Kind::kStraight) {
      if (!(seg.length > 0.0) || !std::isfinite(seg.length)) {
        throw InvalidSegment("straight segment length must be positive");
      }
    } else {
      if (!(seg.radius > 0.0) || !std::isfinite(seg.radius)) {
        throw InvalidSegment("arc radius must be positive");
      }
      if (!(std::abs(seg.sweep) > 0.0) || std::abs(seg.sweep) > kTwoPi) {
        throw InvalidSegment("arc sweep must be non-zero and at most one turn");
      }
      placed.side = seg.sweep > 0.0 ? 1.0 : -1.0;
      placed.center = cursor.position - (placed.side * seg.radius) * right_of(cursor.heading);
    }
    const Pose end = track.local_pose(placed, seg.arc_length());
    placed.end = end.position;
    placed.direction = forward_of(cursor.heading);
    if (seg.kind == TrackSegment::Kind::kStraight) {
      placed.bound_center = 0.5 * (cursor.position + end.position);
      placed.bound_radius = seg.length / 2.0;
    } else {
      placed.bound_center = placed.center;
      placed.bound_radius = seg.radius;
    }
    track.placed_.push_back(placed);
    s += seg.arc_length();
    cursor = end;
  }
  track.segments_ = std::move(segments);
  track.total_length_ = s;
  track.closed_ = norm(cursor.position - start.position) < 1e-6 &&
                  std::abs(wrap_angle(cursor.heading - start.heading)) < 1e-6;
  return track;
}

Pose Track::local_pose(const Placed& p, double ds) const {
  if (p.seg.kind == TrackSegment::Kind::kStraight) {
    return {p.start.position + ds * forward_of(p.start.heading), p.start.heading};
  }
  const double heading = p.start.heading + p.side * ds / p.seg.radius;
  return {p.center + (p.side * p.seg.radius) * right_of(heading), heading};
}

Pose Track::point_at(double s) const {
  if (closed_) {
    s = positive_mod(s, total_length_);
  } else {
    s = std::clamp(s, 0.0, total_length_);
  }
  auto it = std::upper_bound(placed_.begin(), placed_.end(), s,
                             [](double value, const Placed& p) { return value < p.s0; });
  const Placed& p = *std::prev(it);
  return local_pose(p, std::min(s - p.s0, p.seg.arc_length()));
}

TrackProjection Track::project(const Placed& p, Vec2 q) const {
  double ds = 0.0;
  if (p.seg.kind == TrackSegment::Kind::kStraight) {
    ds = std::clamp(dot(q - p.start.position, forward_of(p.start.heading)), 0.0, p.seg.length);
  } else {
    const Vec2 w = q - p.center;
    const double heading = std::atan2(p.side * w.y, p.side * w.x);
    const double swept = positive_mod(p.side * (heading - p.start.heading), kTwoPi);
    const double span = std::abs(p.seg.sweep);
    if (swept <= span) {
      ds = swept * p.seg.radius;
    } else if (kTwoPi - swept < swept - span) {
      ds = 0.0;
    } else {
      ds = p.seg.arc_length();
    }
  }
  TrackProjection proj;
  proj.pose = local_pose(p, ds);
  proj.s = p.s0 + ds;
  const Vec2 rel = q - proj.pose.position;
  proj.distance = norm(rel);
  proj.offset = dot(rel, right_of(proj.pose.heading));
  return proj;
}

TrackProjection Track::nearest(Vec2 q) const {
  TrackProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (const Placed& p : placed_) {
    TrackProjection cand = project(p, q);
    if (cand.distance < best.distance) {
      best = cand;
    }
  }
  if (closed_ && best.s >= total_length_) {
    best.s -= total_length_;
  }
  return best;
}

double Track::segment_distance(const Placed& p, Vec2 q) {
  if (p.seg.kind == TrackSegment::Kind::kStraight) {
    const double t = std::clamp(dot(q - p.start.position, p.direction), 0.0, p.seg.length);
    return norm(q - (p.start.position + t * p.direction));
  }
  const Vec2 w = q - p.center;
  const double heading = std::atan2(p.side * w.y, p.side * w.x);
  const double swept = positive_mod(p.side * (heading - p.start.heading), kTwoPi);
  if (swept <= std::abs(p.seg.sweep)) {
    return std::abs(norm(w) - p.seg.radius);
  }
  return std::min(norm(q - p.start.position), norm(q - p.end));
}

double Track::distance_within(Vec2 q, double cap) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Placed& p : placed_) {
    if (norm(q - p.bound_center) - p.bound_radius > std::min(cap, best)) {
      continue;
    }
    best = std::min(best, segment_distance(p, q));
  }
  return best;
}

Rgb sample_world(const Track& track, Vec2 world) {
  const TrackStyle& style = track.style();
  const double d =
      track.distance_within(world, style.lane_half_width + style.marker_width);
  const double half_marker = style.marker_width / 2.0;
  if (d <= half_marker) {
    return style.marker_color;
  }
  if (std::abs(d - style.lane_half_width) <= half_marker) {
    return style.boundary_color;
  }
  if (d <= style.lane_half_width) {
    return style.road_color;
  }
  return style.off_road_color;
}

SceneConditions SceneConditions::day(std::uint64_t seed) {
  SceneConditions c;
  c.noise_sigma = 4.0;
  c.rng_seed = seed;
  return c;
}

SceneConditions SceneConditions::night(std::uint64_t seed) {
  SceneConditions c;
  c.ambient_gain = 0.35;
  c.headlight_enabled = true;
  c.noise_sigma = 8.0;
  c.rng_seed = seed;
  return c;
}

Renderer::Renderer(const CameraModel& cam) : cam_(cam) {
  cam_.validate();
  const std::size_t n = static_cast<std::size_t>(cam_.res_u) * cam_.res_v;
  ground_.resize(n);
  is_ground_.assign(n, 0);
  for (int v = 0; v < cam_.res_v; ++v) {
    if (!(cam_.vertical_angle(v) > 0.0)) {
      continue;
    }
    for (int u = 0; u < cam_.res_u; ++u) {
      const std::size_t i = static_cast<std::size_t>(v) * cam_.res_u + u;
      ground_[i] = pixel_to_ground(cam_, {static_cast<double>(u), static_cast<double>(v)});
      is_ground_[i] = 1;
    }
  }
}

Image Renderer::render(const Pose& vehicle_pose, const Track& track, const SceneConditions& cond,
                       std::uint64_t frame_index) const {
  if (!(cond.ambient_gain >= 0.0 && cond.ambient_gain <= 1.0) || !(cond.noise_sigma >= 0.0)) {
    throw InvalidArgument("scene conditions out of range");
  }
  Image img(cam_.res_u, cam_.res_v);
  // Counter-seeded generator indexing a fixed table of standard normal
  // deviates, so each frame's noise depends only on (seed, frame index).
  std::uint64_t counter = splitmix64(cond.rng_seed ^ splitmix64(frame_index));
  const auto& deviates = normal_table();
  const bool noisy = cond.noise_sigma > 0.0;

  auto shade = [&](double channel, double gain) -> std::uint8_t {
    double value = channel * gain;
    if (noisy) {
      value += cond.noise_sigma * deviates[splitmix64(counter++) >> (64 - kNormalTableBits)];
    }
    return static_cast<std::uint8_t>(std::lround(std::clamp(value, 0.0, 255.0)));
  };

  const Rgb sky = track.style().sky_color;
  const Vec2 origin = vehicle_pose.position;
  const Vec2 right = right_of(vehicle_pose.heading);
  const Vec2 fwd = forward_of(vehicle_pose.heading);
  auto& out = img.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    Rgb color = sky;
    double gain = cond.ambient_gain;
    if (is_ground_[i]) {
      const GroundPoint g = ground_[i];
      color = sample_world(track, origin + g.x * right + g.y * fwd);
      if (cond.headlight_enabled) {
        const double dx = g.x - cam_.lateral;
        const double dy = g.y - cam_.longitudinal;
        if (std::abs(std::atan2(dx, dy)) <= cond.headlight_half_angle) {
          const double dist = std::hypot(dx, dy);
          const double beam = dist <= cond.headlight_range
                                  ? 1.0
                                  : (cond.headlight_range / dist) * (cond.headlight_range / dist);
          gain = std::max(gain, beam);
        }
      }
    }
    out[i] = Rgb{shade(color.r, gain), shade(color.g, gain), shade(color.b, gain)};
  }
  return img;
}

Image render_frame(const CameraModel& cam, const Pose& vehicle_pose, const Track& track,
                   const SceneConditions& cond, std::uint64_t frame_index) {
  return Renderer(cam).render(vehicle_pose, track, cond, frame_index);
}

}  // namespace vpt
