#include "vpt/image.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "vpt/errors.hpp"

namespace vpt {

Image mirror_horizontal(const Image& img) {
  Image out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      out.at(img.width() - 1 - c, r) = img.at(c, r);
    }
  }
  return out;
}

namespace {

void write_binary(const std::filesystem::path& path, const std::string& header,
                  const char* bytes, std::size_t count) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << header;
  out.write(bytes, static_cast<std::streamsize>(count));
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace

void write_ppm(const std::filesystem::path& path, const Image& img) {
  std::ostringstream header;
  header << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  static_assert(sizeof(Rgb) == 3);
  write_binary(path, header.str(), reinterpret_cast<const char*>(img.data().data()),
               img.data().size() * 3);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ostringstream header;
  header << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  write_binary(path, header.str(), reinterpret_cast<const char*>(img.data().data()),
               img.data().size());
}

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
  in >> magic >> width >> height >> maxval;
  in.get();
  if (magic != "P6" || width <= 0 || height <= 0 || maxval != 255) {
    throw IoError("unsupported PPM header in " + path.string());
  }
  Image img(width, height);
  in.read(reinterpret_cast<char*>(img.data().data()),
          static_cast<std::streamsize>(img.data().size() * 3));
  if (!in) {
    throw IoError("truncated PPM " + path.string());
  }
  return img;
}

Image to_rgb(const GrayImage& img, bool binary) {
  Image out(img.width(), img.height());
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    std::uint8_t v = img.data()[i];
    if (binary) {
      v = v ? 255 : 0;
    }
    out.data()[i] = Rgb{v, v, v};
  }
  return out;
}

}  // namespace vpt
