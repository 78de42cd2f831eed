#include "vpt/camera_geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vpt/errors.hpp"

namespace vpt {

void CameraModel::validate() const {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  if (!(height > 0.0)) {
    throw InvalidArgument("camera height must be positive");
  }
  if (!(half_fov_u > 0.0 && half_fov_u < kHalfPi) || !(half_fov_v > 0.0 && half_fov_v < kHalfPi)) {
    throw InvalidArgument("camera half field of view must lie in (0, pi/2)");
  }
  if (res_u < 2 || res_v < 2) {
    throw InvalidArgument("camera resolution must be at least 2x2");
  }
}

CameraModel default_camera() {
  CameraModel cam;
  cam.height = 0.8;
  cam.half_fov_u = deg2rad(30.0);
  cam.res_u = 320;
  cam.res_v = 240;
  cam.half_fov_v = std::atan(std::tan(cam.half_fov_u) * cam.res_v / cam.res_u);
  cam.pitch = deg2rad(35.0);
  return cam;
}

GroundPoint pixel_to_ground(const CameraModel& cam, PixelCoord p) {
  const double depression = cam.vertical_angle(p.v);
  if (!(depression > 0.0)) {
    throw AboveHorizon("pixel row " + std::to_string(p.v) + " does not intersect the ground");
  }
  const double range = cam.height / std::tan(depression);
  const double bearing = cam.horizontal_angle(p.u);
  return {range * std::sin(bearing) + cam.lateral, range * std::cos(bearing) + cam.longitudinal};
}

PixelCoord ground_to_pixel(const CameraModel& cam, GroundPoint g) {
  const double dx = g.x - cam.lateral;
  const double dy = g.y - cam.longitudinal;
  if (!(dy > 0.0)) {
    throw BehindCamera("ground point is not ahead of the camera");
  }
  const double v =
      (cam.res_v - 1) * (std::atan(cam.height / std::hypot(dx, dy)) + cam.half_fov_v - cam.pitch) /
      (2.0 * cam.half_fov_v);
  const double u =
      (cam.res_u - 1) * (std::atan2(dx, dy) + cam.half_fov_u - cam.yaw) / (2.0 * cam.half_fov_u);
  return {u, v};
}

OverheadLayout make_overhead_layout(const CameraModel& cam, const GroundRegion& region,
                                    double resolution_m_per_px) {
  if (!(resolution_m_per_px > 0.0)) {
    throw InvalidRegion("overhead resolution must be positive");
  }
  if (!(region.x_max > region.x_min) || !(region.y_max > region.y_min)) {
    throw InvalidRegion("overhead region is empty");
  }
  if (!(region.y_min > cam.longitudinal)) {
    throw InvalidRegion("overhead region reaches behind the camera");
  }
  OverheadLayout layout;
  layout.region = region;
  layout.resolution = resolution_m_per_px;
  layout.width = static_cast<int>(std::lround((region.x_max - region.x_min) / resolution_m_per_px));
  layout.height = static_cast<int>(std::lround((region.y_max - region.y_min) / resolution_m_per_px));
  if (layout.width < 1 || layout.height < 1) {
    throw InvalidRegion("overhead region is smaller than one pixel");
  }
  return layout;
}

OverheadWarp::OverheadWarp(const CameraModel& cam, const GroundRegion& region,
                           double resolution_m_per_px)
    : layout_(make_overhead_layout(cam, region, resolution_m_per_px)),
      source_width_(cam.res_u),
      source_height_(cam.res_v) {
  cam.validate();
  source_index_.resize(static_cast<std::size_t>(layout_.width) * layout_.height);
  for (int row = 0; row < layout_.height; ++row) {
    for (int col = 0; col < layout_.width; ++col) {
      const PixelCoord p = ground_to_pixel(cam, layout_.ground_of(col, row));
      const long u = std::lround(p.u);
      const long v = std::lround(p.v);
      std::int32_t idx = kOutside;
      if (u >= 0 && u < cam.res_u && v >= 0 && v < cam.res_v && cam.vertical_angle(v) > 0.0) {
        idx = static_cast<std::int32_t>(v * cam.res_u + u);
      }
      source_index_[static_cast<std::size_t>(row) * layout_.width + col] = idx;
    }
  }
}

Image OverheadWarp::apply(const Image& frame) const {
  if (frame.width() != source_width_ || frame.height() != source_height_) {
    throw InvalidArgument("frame size does not match the camera resolution");
  }
  Image out(layout_.width, layout_.height);
  const auto& src = frame.data();
  auto& dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const std::int32_t idx = source_index_[i];
    if (idx != kOutside) {
      dst[i] = src[static_cast<std::size_t>(idx)];
    }
  }
  return out;
}

Image warp_to_overhead(const CameraModel& cam, const Image& frame, const GroundRegion& region,
                       double resolution_m_per_px) {
  return OverheadWarp(cam, region, resolution_m_per_px).apply(frame);
}

}  // namespace vpt
