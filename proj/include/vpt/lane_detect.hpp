#pragma once

#include <array>
#include <vector>

#include "vpt/camera_geometry.hpp"
#include "vpt/image.hpp"

namespace vpt {

struct DetectorConfig {
  int n_bisections = 12;
  int window_width_px = 60;
  int binarize_threshold = 180;
  int combine_min_channels = 2;
  int min_pixels = 20;
  int poly_degree = 2;
  int clahe_tile = 40;
  double clahe_clip = 3.0;
  double kalman_q = 4.0;  // px^2
  double kalman_r = 9.0;  // px^2
  // Short preview: the far point sits about 2.2 m ahead.
  GroundRegion region{-2.0, 2.0, 0.5, 2.2};
  double resolution_m_per_px = 0.01;

  // Throws InvalidArgument.
  void validate() const;
};

// Scalar random-walk Kalman state of one window band.
struct BandState {
  double center_px = 0.0;
  double variance_px2 = 0.0;
  bool last_valid = false;
};

struct WindowState {
  std::vector<BandState> bands;
  // Set once the windows have been placed on an observed line.
  bool seeded = false;
};

// Column as a polynomial in row: x(v) = sum coeffs[k] * v^k.
struct LaneEstimate {
  std::vector<double> coeffs;
  double eod_px = 0.0;   // positive when the far point lies right of centre
  double eoa_deg = 0.0;  // positive when the line leans right at the far point
  bool valid = false;

  double eval(double v) const;
  double slope(double v) const;
};

struct ChannelSet {
  GrayImage lab_b;      // 128 + b*, clamped
  GrayImage hsv_value;  // max(r, g, b)
  GrayImage hls_light;  // (max + min) / 2
};

ChannelSet extract_channels(const Image& img);

// CIELAB b* of one sRGB (D65) colour, unscaled.
double lab_b_star(Rgb c);

GrayImage clahe(const GrayImage& channel, int tile_px, double clip);

BinaryImage binarize_combine(const GrayImage& ch1, const GrayImage& ch2, const GrayImage& ch3,
                             int threshold, int min_channels);

// Row extent [top, bottom) of each band, index 0 at the bottom of the image.
struct Band {
  int top = 0;
  int bottom = 0;
  double mid_row() const { return (top + bottom - 1) / 2.0; }
};
std::vector<Band> make_bands(int image_height, int n_bisections);

// Kalman window search and polynomial fit. Mutates only `state`.
LaneEstimate sliding_window_fit(const BinaryImage& bin, WindowState& state,
                                const DetectorConfig& cfg);

// Least-squares polynomial through (v, x) samples; coefficients low order first.
std::vector<double> fit_polynomial(const std::vector<double>& v, const std::vector<double>& x,
                                   int degree);

struct DetectionStages {
  Image overhead;
  BinaryImage binary;
};

// Overhead warp, channel extraction, CLAHE, binarisation and window fit for
// one camera. Owns the precomputed warp.
class LaneDetector {
 public:
  LaneDetector(const CameraModel& cam, DetectorConfig cfg);

  const DetectorConfig& config() const { return cfg_; }
  const OverheadLayout& layout() const { return warp_.layout(); }

  LaneEstimate detect(const Image& frame, WindowState& state,
                      DetectionStages* stages = nullptr) const;

 private:
  DetectorConfig cfg_;
  OverheadWarp warp_;
};

LaneEstimate detect(const Image& frame, const CameraModel& cam, WindowState& state,
                    const DetectorConfig& cfg);

}  // namespace vpt
