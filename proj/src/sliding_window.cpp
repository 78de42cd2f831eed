#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "vpt/errors.hpp"
#include "vpt/lane_detect.hpp"

namespace vpt {

void DetectorConfig::validate() const {
  if (n_bisections < 2) {
    throw InvalidArgument("need at least two window bands");
  }
  if (window_width_px < 3) {
    throw InvalidArgument("window width must be at least 3 px");
  }
  if (poly_degree < 1) {
    throw InvalidArgument("polynomial degree must be at least 1");
  }
  if (combine_min_channels < 1 || combine_min_channels > 3) {
    throw InvalidArgument("combine_min_channels must be 1, 2 or 3");
  }
  if (binarize_threshold < 0 || binarize_threshold > 255) {
    throw InvalidArgument("binarize threshold must lie in [0, 255]");
  }
  if (min_pixels < 1 || clahe_tile < 1 || !(clahe_clip > 1.0)) {
    throw InvalidArgument("invalid pixel count or CLAHE parameters");
  }
  if (!(kalman_q >= 0.0) || !(kalman_r > 0.0)) {
    throw InvalidArgument("Kalman noise variances must be non-negative (r positive)");
  }
}

double LaneEstimate::eval(double v) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * v + *it;
  }
  return acc;
}

double LaneEstimate::slope(double v) const {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    acc = acc * v + static_cast<double>(k) * coeffs[k];
  }
  return acc;
}

std::vector<Band> make_bands(int image_height, int n_bisections) {
  const int band_h = image_height / n_bisections;
  std::vector<Band> bands(static_cast<std::size_t>(n_bisections));
  for (int k = 0; k < n_bisections; ++k) {
    bands[k].bottom = image_height - k * band_h;
    bands[k].top = k == n_bisections - 1 ? 0 : image_height - (k + 1) * band_h;
  }
  return bands;
}

std::vector<double> fit_polynomial(const std::vector<double>& v, const std::vector<double>& x,
                                   int degree) {
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXd design(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      design(i, k) = p;
      p *= v[static_cast<std::size_t>(i)];
    }
    rhs(i) = x[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd sol = design.colPivHouseholderQr().solve(rhs);
  return {sol.data(), sol.data() + sol.size()};
}

namespace {

struct WindowHits {
  int count = 0;
  double centroid = 0.0;
};

WindowHits scan_window(const BinaryImage& bin, const Band& band, double center, int width) {
  const int lo = std::max(0, static_cast<int>(std::ceil(center - width / 2.0)));
  const int hi = std::min(bin.width() - 1, static_cast<int>(std::floor(center + width / 2.0)));
  WindowHits hits;
  long sum = 0;
  for (int r = band.top; r < band.bottom; ++r) {
    const std::uint8_t* row = bin.row(r);
    for (int c = lo; c <= hi; ++c) {
      if (row[c]) {
        ++hits.count;
        sum += c;
      }
    }
  }
  if (hits.count > 0) {
    hits.centroid = static_cast<double>(sum) / hits.count;
  }
  return hits;
}

// Column histogram peak of the bottom third, nearest the image centre on ties.
bool seed_column(const BinaryImage& bin, double& column) {
  const int top = bin.height() - std::max(1, bin.height() / 3);
  std::vector<int> hist(static_cast<std::size_t>(bin.width()), 0);
  for (int r = top; r < bin.height(); ++r) {
    const std::uint8_t* row = bin.row(r);
    for (int c = 0; c < bin.width(); ++c) {
      hist[c] += row[c];
    }
  }
  const double mid = (bin.width() - 1) / 2.0;
  int best = -1;
  for (int c = 0; c < bin.width(); ++c) {
    if (hist[c] == 0) {
      continue;
    }
    if (best < 0 || hist[c] > hist[best] ||
        (hist[c] == hist[best] && std::abs(c - mid) < std::abs(best - mid))) {
      best = c;
    }
  }
  if (best < 0) {
    return false;
  }
  column = best;
  return true;
}

}  // namespace

LaneEstimate sliding_window_fit(const BinaryImage& bin, WindowState& state,
                                const DetectorConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_bisections;
  if (bin.height() < n || bin.width() < 1) {
    throw InvalidArgument("binary image too small for the band count");
  }
  const double initial_variance = (cfg.window_width_px / 2.0) * (cfg.window_width_px / 2.0);
  if (state.bands.size() != static_cast<std::size_t>(n)) {
    state.bands.assign(static_cast<std::size_t>(n),
                       BandState{(bin.width() - 1) / 2.0, initial_variance, false});
    state.seeded = false;
  }
  if (!state.seeded) {
    double column = 0.0;
    if (seed_column(bin, column)) {
      for (BandState& b : state.bands) {
        b = BandState{column, initial_variance, false};
      }
      state.seeded = true;
    }
  }

  const std::vector<Band> bands = make_bands(bin.height(), n);
  std::vector<double> rows;
  std::vector<double> cols;
  for (int k = 0; k < n; ++k) {
    BandState& s = state.bands[k];
    s.variance_px2 += cfg.kalman_q;

    WindowHits hits = scan_window(bin, bands[k], s.center_px, cfg.window_width_px);
    if (hits.count < cfg.min_pixels && k > 0 && state.bands[k - 1].last_valid) {
      // Reacquire from the band below when this window has lost the line.
      WindowHits below =
          scan_window(bin, bands[k], state.bands[k - 1].center_px, cfg.window_width_px);
      if (below.count >= cfg.min_pixels) {
        hits = below;
        s.variance_px2 = initial_variance + cfg.kalman_q;
      }
    }

    if (hits.count >= cfg.min_pixels) {
      const double gain = s.variance_px2 / (s.variance_px2 + cfg.kalman_r);
      s.center_px += gain * (hits.centroid - s.center_px);
      s.variance_px2 *= 1.0 - gain;
      s.center_px = std::clamp(s.center_px, 0.0, static_cast<double>(bin.width() - 1));
      s.last_valid = true;
      rows.push_back(bands[k].mid_row());
      cols.push_back(s.center_px);
    } else {
      s.last_valid = false;
    }
  }

  LaneEstimate est;
  if (static_cast<int>(rows.size()) < cfg.poly_degree + 2) {
    return est;
  }
  est.coeffs = fit_polynomial(rows, cols, cfg.poly_degree);
  const double far_row = bands[n - 1].mid_row();
  est.eod_px = est.eval(far_row) - (bin.width() - 1) / 2.0;
  // Rows grow downward, so leaning right toward the far point is -dx/dv.
  est.eoa_deg = rad2deg(std::atan(-est.slope(far_row)));
  est.valid = std::abs(est.eod_px) <= bin.width();
  return est;
}

LaneDetector::LaneDetector(const CameraModel& cam, DetectorConfig cfg)
    : cfg_(std::move(cfg)), warp_(cam, cfg_.region, cfg_.resolution_m_per_px) {
  cfg_.validate();
}

LaneEstimate LaneDetector::detect(const Image& frame, WindowState& state,
                                  DetectionStages* stages) const {
  Image overhead = warp_.apply(frame);
  const ChannelSet ch = extract_channels(overhead);
  BinaryImage bin = binarize_combine(clahe(ch.lab_b, cfg_.clahe_tile, cfg_.clahe_clip),
                                     clahe(ch.hsv_value, cfg_.clahe_tile, cfg_.clahe_clip),
                                     clahe(ch.hls_light, cfg_.clahe_tile, cfg_.clahe_clip),
                                     cfg_.binarize_threshold, cfg_.combine_min_channels);
  LaneEstimate est = sliding_window_fit(bin, state, cfg_);
  if (stages) {
    stages->overhead = std::move(overhead);
    stages->binary = std::move(bin);
  }
  return est;
}

LaneEstimate detect(const Image& frame, const CameraModel& cam, WindowState& state,
                    const DetectorConfig& cfg) {
  return LaneDetector(cam, cfg).detect(frame, state);
}

}  // namespace vpt
