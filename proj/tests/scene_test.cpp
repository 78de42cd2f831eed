#include "vpt/scene.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "vpt/errors.hpp"

namespace vpt {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(BuildTrack, SingleStraight) {
  const Track t = build_track({TrackSegment::straight(100.0)});
  EXPECT_DOUBLE_EQ(t.total_length(), 100.0);
  EXPECT_EQ(t.point_at(0.0).position, (Vec2{0.0, 0.0}));
  EXPECT_NEAR(t.point_at(100.0).position.x, 0.0, 1e-12);
  EXPECT_NEAR(t.point_at(100.0).position.y, 100.0, 1e-12);
  EXPECT_FALSE(t.closed());
}

TEST(BuildTrack, StraightThenArcLength) {
  const Track t = build_track({TrackSegment::straight(10.0), TrackSegment::arc(5.0, kPi / 2)});
  EXPECT_NEAR(t.total_length(), 10.0 + 5.0 * kPi / 2.0, 1e-12);
  EXPECT_NEAR(t.total_length(), 17.854, 1e-3);
  // A left quarter turn from heading +y ends at (-5, 15) heading -x.
  const Pose end = t.point_at(t.total_length());
  EXPECT_NEAR(end.position.x, -5.0, 1e-9);
  EXPECT_NEAR(end.position.y, 15.0, 1e-9);
  EXPECT_NEAR(end.heading, kPi / 2, 1e-12);
}

TEST(BuildTrack, RejectsBadSegments) {
  EXPECT_THROW(build_track({TrackSegment::arc(0.0, 1.0)}), InvalidSegment);
  EXPECT_THROW(build_track({TrackSegment::straight(-1.0)}), InvalidSegment);
  EXPECT_THROW(build_track({TrackSegment::arc(5.0, 0.0)}), InvalidSegment);
  EXPECT_THROW(build_track({}), InvalidSegment);
  TrackStyle narrow;
  narrow.lane_half_width = 0.05;
  EXPECT_THROW(build_track({TrackSegment::straight(1.0)}, narrow), InvalidSegment);
}

TEST(BuildTrack, ClosedLoopWrapsArcLength) {
  const Track loop = build_track({TrackSegment::straight(40.0), TrackSegment::arc(20.0, kPi),
                                  TrackSegment::straight(40.0), TrackSegment::arc(20.0, kPi)});
  EXPECT_TRUE(loop.closed());
  const Pose a = loop.point_at(3.0);
  const Pose b = loop.point_at(3.0 + loop.total_length());
  EXPECT_NEAR(a.position.x, b.position.x, 1e-9);
  EXPECT_NEAR(a.position.y, b.position.y, 1e-9);
}

TEST(Nearest, SignedOffsetAndArcDistance) {
  const Track straight = build_track({TrackSegment::straight(50.0)});
  EXPECT_NEAR(straight.nearest({1.0, 20.0}).offset, 1.0, 1e-12);
  EXPECT_NEAR(straight.nearest({-0.4, 20.0}).offset, -0.4, 1e-12);
  EXPECT_NEAR(straight.nearest({1.0, 20.0}).s, 20.0, 1e-12);

  const Track arc = build_track({TrackSegment::arc(5.0, kPi / 2)});
  // The circle centre of a left turn from the origin is at (-5, 0).
  const TrackProjection p = arc.nearest({-5.0, 0.0});
  EXPECT_NEAR(p.distance, 5.0, 1e-12);
  EXPECT_NEAR(std::abs(p.offset), 5.0, 1e-12);
}

TEST(SampleWorld, Examples) {
  const Track t = build_track({TrackSegment::straight(50.0)});
  const TrackStyle& s = t.style();
  EXPECT_EQ(sample_world(t, {0.0, 10.0}), s.marker_color);
  EXPECT_EQ(sample_world(t, {s.lane_half_width / 2, 10.0}), s.road_color);
  EXPECT_EQ(sample_world(t, {2 * s.lane_half_width, 10.0}), s.off_road_color);
  EXPECT_EQ(sample_world(t, {s.lane_half_width, 10.0}), s.boundary_color);
  EXPECT_EQ(sample_world(t, {-s.lane_half_width, 10.0}), s.boundary_color);
}

TEST(SampleWorld, InvariantUnderRigidPlacement) {
  const std::vector<TrackSegment> segs{TrackSegment::straight(10.0),
                                       TrackSegment::arc(8.0, -kPi / 2),
                                       TrackSegment::straight(5.0)};
  const Track base = build_track(segs);
  const Pose placement{{12.5, -3.0}, 0.7};
  const Track moved = build_track(segs, {}, placement);
  for (double x = -3.0; x <= 12.0; x += 0.173) {
    for (double y = -2.0; y <= 22.0; y += 0.191) {
      EXPECT_EQ(sample_world(base, {x, y}), sample_world(moved, placement.to_world({x, y})));
    }
  }
}

TEST(RenderFrame, StraightMarkerOccupiesCenterColumns) {
  const CameraModel cam = default_camera();
  const Track t = build_track({TrackSegment::straight(200.0)});
  const Image img = render_frame(cam, Pose{}, t, SceneConditions{});
  const double half_marker = t.style().marker_width / 2.0;
  int checked = 0;
  for (int v = 0; v < cam.res_v; ++v) {
    if (!(cam.vertical_angle(v) > 0.0)) {
      EXPECT_EQ(img.at(0, v), t.style().sky_color);
      continue;
    }
    const double depth = pixel_to_ground(cam, {cam.center_column(), double(v)}).y;
    const double edge = ground_to_pixel(cam, {half_marker, depth}).u;
    for (int u = 0; u < cam.res_u; ++u) {
      const double offset = std::abs(u - cam.center_column());
      const double margin = std::abs(offset - (edge - cam.center_column()));
      if (margin < 0.5) {
        continue;  // pixel centre straddles the marker edge
      }
      const bool inside = offset < edge - cam.center_column();
      const Rgb expected_color = inside ? t.style().marker_color : img.at(u, v);
      EXPECT_EQ(img.at(u, v), expected_color) << u << "," << v;
      if (inside) {
        ++checked;
      } else {
        EXPECT_NE(img.at(u, v), t.style().marker_color) << u << "," << v;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(RenderFrame, ZeroAmbientIsBlackBelowHorizon) {
  const CameraModel cam = default_camera();
  SceneConditions dark;
  dark.ambient_gain = 0.0;
  const Image img = render_frame(cam, Pose{}, build_track({TrackSegment::straight(50.0)}), dark);
  for (int v = 0; v < cam.res_v; ++v) {
    if (cam.vertical_angle(v) > 0.0) {
      for (int u = 0; u < cam.res_u; ++u) {
        EXPECT_EQ(img.at(u, v), Rgb{});
      }
    }
  }
}

TEST(RenderFrame, DeterministicPerSeedAndFrame) {
  const CameraModel cam = default_camera();
  const Track t = build_track({TrackSegment::straight(50.0), TrackSegment::arc(8.0, 1.0)});
  const Pose pose{{0.2, 3.0}, 0.05};
  const SceneConditions night = SceneConditions::night(99);
  const Image a = render_frame(cam, pose, t, night, 17);
  EXPECT_EQ(a, render_frame(cam, pose, t, night, 17));
  EXPECT_NE(a, render_frame(cam, pose, t, night, 18));
  EXPECT_NE(a, render_frame(cam, pose, t, SceneConditions::night(100), 17));
}

TEST(RenderFrame, HeadlightsBrightenNearGround) {
  const CameraModel cam = default_camera();
  const Track t = build_track({TrackSegment::straight(50.0)});
  SceneConditions night = SceneConditions::night();
  night.noise_sigma = 0.0;
  SceneConditions unlit = night;
  unlit.headlight_enabled = false;
  const Image lit = render_frame(cam, Pose{}, t, night);
  const Image dim = render_frame(cam, Pose{}, t, unlit);
  const int u = static_cast<int>(cam.center_column());
  const int v = cam.res_v - 1;
  EXPECT_EQ(lit.at(u, v), t.style().marker_color);
  EXPECT_LT(dim.at(u, v).r, lit.at(u, v).r);
}

TEST(RenderFrame, RejectsOutOfRangeConditions) {
  SceneConditions bad;
  bad.ambient_gain = 1.5;
  EXPECT_THROW(render_frame(default_camera(), Pose{}, build_track({TrackSegment::straight(5.0)}),
                            bad),
               InvalidArgument);
}

TEST(Image, PpmRoundTripAndMirror) {
  Image img(4, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      img.at(c, r) = Rgb{std::uint8_t(c * 60), std::uint8_t(r * 100), 7};
    }
  }
  const auto path = std::filesystem::temp_directory_path() / "vpt_scene_test.ppm";
  write_ppm(path, img);
  EXPECT_EQ(read_ppm(path), img);
  std::filesystem::remove(path);
  const Image m = mirror_horizontal(img);
  EXPECT_EQ(m.at(0, 1), img.at(3, 1));
  EXPECT_EQ(mirror_horizontal(m), img);
  EXPECT_THROW(write_ppm("/nonexistent-dir/x.ppm", img), IoError);
}

}  // namespace
}  // namespace vpt
