#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace vpt {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Row-major single-plane raster. Row 0 is the top of the image.
template <typename Pixel>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, Pixel fill = Pixel{})
      : width_(width),
        height_(height),
        pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  Pixel& at(int col, int row) { return pixels_[index(col, row)]; }
  const Pixel& at(int col, int row) const { return pixels_[index(col, row)]; }

  Pixel* row(int r) { return pixels_.data() + static_cast<std::size_t>(r) * width_; }
  const Pixel* row(int r) const { return pixels_.data() + static_cast<std::size_t>(r) * width_; }

  std::vector<Pixel>& data() { return pixels_; }
  const std::vector<Pixel>& data() const { return pixels_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Pixel> pixels_;
};

using Image = Raster<Rgb>;
using GrayImage = Raster<std::uint8_t>;
// 0 or 1 per pixel.
using BinaryImage = Raster<std::uint8_t>;

Image mirror_horizontal(const Image& img);

// Binary P6 / P5 writers (maxval 255). Throw IoError on failure.
void write_ppm(const std::filesystem::path& path, const Image& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
Image read_ppm(const std::filesystem::path& path);

// Expands a gray or 0/1 binary plane to RGB for dumping; binary planes are
// scaled so set pixels appear white.
Image to_rgb(const GrayImage& img, bool binary = false);

}  // namespace vpt
