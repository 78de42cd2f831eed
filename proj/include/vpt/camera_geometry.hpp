#pragma once

#include <cstdint>
#include <vector>

#include "vpt/image.hpp"
#include "vpt/pose.hpp"

namespace vpt {

// Pinhole-free trigonometric camera model. Angles are radians.
//
// The camera sits at (lateral, longitudinal, height) in the ground frame
// (x right, y forward). Pixel (u, v) has row v = 0 at the top; its ray makes a
// depression angle of `2*alpha_v/(R_v-1)*v - alpha_v + pitch` below the
// horizon and a horizontal angle of `2*alpha_u/(R_u-1)*u - alpha_u + yaw`
// from the y axis, positive to the right.
struct CameraModel {
  double lateral = 0.0;       // d, metres
  double longitudinal = 0.0;  // l, metres
  double height = 0.8;        // h, metres
  double yaw = 0.0;           // gamma
  double pitch = 0.0;         // theta, positive looks down
  double half_fov_u = 0.0;    // alpha_u
  double half_fov_v = 0.0;    // alpha_v
  int res_u = 320;
  int res_v = 240;

  // Throws InvalidArgument when the invariants on height, field of view or
  // resolution are violated.
  void validate() const;

  double vertical_angle(double v) const {
    return 2.0 * half_fov_v / (res_v - 1) * v - half_fov_v + pitch;
  }
  double horizontal_angle(double u) const {
    return 2.0 * half_fov_u / (res_u - 1) * u - half_fov_u + yaw;
  }
  double center_column() const { return (res_u - 1) / 2.0; }
};

// 320x240, 60 degree horizontal field of view at 0.8 m, pitched 35 degrees
// down, aspect-consistent vertical field of view.
CameraModel default_camera();

struct GroundPoint {
  double x = 0.0;
  double y = 0.0;
};

struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

// Image -> ground. Throws AboveHorizon when the pixel ray does not descend.
GroundPoint pixel_to_ground(const CameraModel& cam, PixelCoord p);

// Ground -> image. The result may fall outside the image. Throws
// BehindCamera when y - l <= 0.
PixelCoord ground_to_pixel(const CameraModel& cam, GroundPoint g);

// Axis-aligned rectangle on the ground plane in the camera's ground frame.
struct GroundRegion {
  double x_min = -4.0;
  double x_max = 4.0;
  double y_min = 1.0;
  double y_max = 12.0;
};

// Layout of an overhead raster: column c covers x in
// [x_min + c*res, x_min + (c+1)*res), row r covers y measured downward from
// y_max, so row 0 is the far edge.
struct OverheadLayout {
  GroundRegion region;
  double resolution = 0.025;  // metres per pixel
  int width = 0;
  int height = 0;

  GroundPoint ground_of(int col, int row) const {
    return {region.x_min + (col + 0.5) * resolution, region.y_max - (row + 0.5) * resolution};
  }
};

// Throws InvalidRegion for empty regions, regions reaching behind the
// camera, or non-positive resolution.
OverheadLayout make_overhead_layout(const CameraModel& cam, const GroundRegion& region,
                                    double resolution_m_per_px);

// Precomputed nearest-neighbour source index for every overhead pixel. The
// warp is a fixed function of camera and layout, so it is built once.
class OverheadWarp {
 public:
  OverheadWarp(const CameraModel& cam, const GroundRegion& region, double resolution_m_per_px);

  const OverheadLayout& layout() const { return layout_; }
  Image apply(const Image& frame) const;

 private:
  static constexpr std::int32_t kOutside = -1;

  OverheadLayout layout_;
  int source_width_ = 0;
  int source_height_ = 0;
  std::vector<std::int32_t> source_index_;
};

// One-shot form of OverheadWarp. Output pixels whose source lies outside the
// frame are black.
Image warp_to_overhead(const CameraModel& cam, const Image& frame, const GroundRegion& region,
                       double resolution_m_per_px);

}  // namespace vpt
