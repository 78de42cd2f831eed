#pragma once

#include <cmath>
#include <numbers>

namespace vpt {

// World frame: x to the right, y forward at the track start. Headings are
// measured counter-clockwise from +y, so heading 0 points along +y and a
// positive heading rate turns left.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Unit vector along a heading.
inline Vec2 forward_of(double heading) { return {-std::sin(heading), std::cos(heading)}; }
// Unit vector pointing to the right of a heading.
inline Vec2 right_of(double heading) { return {std::cos(heading), std::sin(heading)}; }

struct Pose {
  Vec2 position;
  double heading = 0.0;

  // Maps a point given in this pose's local frame (x right, y forward) to
  // the parent frame.
  Vec2 to_world(Vec2 local) const {
    return position + local.x * right_of(heading) + local.y * forward_of(heading);
  }
  Vec2 to_local(Vec2 world) const {
    const Vec2 rel = world - position;
    return {dot(rel, right_of(heading)), dot(rel, forward_of(heading))};
  }

  friend bool operator==(const Pose&, const Pose&) = default;
};

inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a;
}

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace vpt
