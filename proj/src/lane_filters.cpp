// Pixel-level stages of the line detector: colour channels, CLAHE and
// channel-agreement binarisation.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "vpt/errors.hpp"
#include "vpt/lane_detect.hpp"

namespace vpt {

namespace {

// sRGB transfer function inverse, per 8-bit code.
const std::array<double, 256>& srgb_to_linear_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) {
      const double c = i / 255.0;
      t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return table;
}

double lab_f(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  if (t > kDelta * kDelta * kDelta) {
    return std::cbrt(t);
  }
  return t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

}  // namespace

double lab_b_star(Rgb c) {
  const auto& lin = srgb_to_linear_table();
  const double r = lin[c.r];
  const double g = lin[c.g];
  const double b = lin[c.b];
  // D65 reference white.
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
  return 200.0 * (lab_f(y) - lab_f(z));
}

ChannelSet extract_channels(const Image& img) {
  ChannelSet out{GrayImage(img.width(), img.height()), GrayImage(img.width(), img.height()),
                 GrayImage(img.width(), img.height())};
  const auto& px = img.data();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const Rgb c = px[i];
    const int hi = std::max({c.r, c.g, c.b});
    const int lo = std::min({c.r, c.g, c.b});
    const double b = 128.0 + lab_b_star(c);
    out.lab_b.data()[i] = static_cast<std::uint8_t>(std::lround(std::clamp(b, 0.0, 255.0)));
    out.hsv_value.data()[i] = static_cast<std::uint8_t>(hi);
    out.hls_light.data()[i] = static_cast<std::uint8_t>((hi + lo + 1) / 2);
  }
  return out;
}

GrayImage clahe(const GrayImage& channel, int tile_px, double clip) {
  if (tile_px < 1 || !(clip > 0.0)) {
    throw InvalidArgument("CLAHE tile must be positive and clip limit positive");
  }
  const int width = channel.width();
  const int height = channel.height();
  GrayImage out(width, height);
  if (width == 0 || height == 0) {
    return out;
  }
  const int tiles_x = (width + tile_px - 1) / tile_px;
  const int tiles_y = (height + tile_px - 1) / tile_px;

  // One 256-entry lookup per tile.
  std::vector<std::array<std::uint8_t, 256>> luts(static_cast<std::size_t>(tiles_x) * tiles_y);
  for (int ty = 0; ty < tiles_y; ++ty) {
    for (int tx = 0; tx < tiles_x; ++tx) {
      const int x0 = tx * tile_px;
      const int y0 = ty * tile_px;
      const int x1 = std::min(x0 + tile_px, width);
      const int y1 = std::min(y0 + tile_px, height);
      std::array<double, 256> hist{};
      for (int y = y0; y < y1; ++y) {
        const std::uint8_t* row = channel.row(y);
        for (int x = x0; x < x1; ++x) {
          hist[row[x]] += 1.0;
        }
      }
      const double area = static_cast<double>((x1 - x0) * (y1 - y0));
      const double limit = std::max(1.0, clip * area / 256.0);
      double excess = 0.0;
      for (double& h : hist) {
        if (h > limit) {
          excess += h - limit;
          h = limit;
        }
      }
      const double share = excess / 256.0;
      auto& lut = luts[static_cast<std::size_t>(ty) * tiles_x + tx];
      double cdf = 0.0;
      for (int i = 0; i < 256; ++i) {
        cdf += hist[i] + share;
        lut[i] = static_cast<std::uint8_t>(std::lround(std::clamp(255.0 * cdf / area, 0.0, 255.0)));
      }
    }
  }

  // Bilinear blend of the four surrounding tile mappings, clamped at the
  // border tiles.
  auto axis = [tile_px](int p, int tiles, int& i0, int& i1, double& w) {
    const double g = (p + 0.5) / tile_px - 0.5;
    const double f = std::floor(g);
    w = g - f;
    i0 = static_cast<int>(f);
    i1 = i0 + 1;
    if (i0 < 0) {
      i0 = 0;
      i1 = 0;
    } else if (i1 > tiles - 1) {
      i0 = tiles - 1;
      i1 = tiles - 1;
    }
  };

  std::vector<int> xi0(width), xi1(width);
  std::vector<double> xw(width);
  for (int x = 0; x < width; ++x) {
    axis(x, tiles_x, xi0[x], xi1[x], xw[x]);
  }
  for (int y = 0; y < height; ++y) {
    int yi0 = 0;
    int yi1 = 0;
    double yw = 0.0;
    axis(y, tiles_y, yi0, yi1, yw);
    const std::uint8_t* src = channel.row(y);
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < width; ++x) {
      const int value = src[x];
      const double top = (1.0 - xw[x]) * luts[yi0 * tiles_x + xi0[x]][value] +
                         xw[x] * luts[yi0 * tiles_x + xi1[x]][value];
      const double bottom = (1.0 - xw[x]) * luts[yi1 * tiles_x + xi0[x]][value] +
                            xw[x] * luts[yi1 * tiles_x + xi1[x]][value];
      const double blended = (1.0 - yw) * top + yw * bottom;
      dst[x] = static_cast<std::uint8_t>(std::lround(std::clamp(blended, 0.0, 255.0)));
    }
  }
  return out;
}

BinaryImage binarize_combine(const GrayImage& ch1, const GrayImage& ch2, const GrayImage& ch3,
                             int threshold, int min_channels) {
  if (ch1.width() != ch2.width() || ch1.width() != ch3.width() || ch1.height() != ch2.height() ||
      ch1.height() != ch3.height()) {
    throw InvalidArgument("channel images differ in size");
  }
  BinaryImage out(ch1.width(), ch1.height());
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    const int hot = (ch1.data()[i] >= threshold) + (ch2.data()[i] >= threshold) +
                    (ch3.data()[i] >= threshold);
    out.data()[i] = hot >= min_channels ? 1 : 0;
  }
  return out;
}

}  // namespace vpt
