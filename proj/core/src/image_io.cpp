#include "selsample/image_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace selsample {

namespace {

int read_header_int(std::istream& in) {
  // Skip whitespace and '#' comments, then parse a decimal integer.
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) {
    throw std::runtime_error("pnm: malformed header");
  }
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1 << 20) throw std::runtime_error("pnm: header value out of range");
    c = in.get();
  }
  if (c != EOF) in.unget();
  return value;
}

}  // namespace

RawImage read_pnm(std::istream& in) {
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != 'P' || (m1 != '5' && m1 != '6')) {
    throw std::runtime_error("pnm: not a binary PGM/PPM (P5/P6) file");
  }
  RawImage img;
  img.channels = (m1 == '6') ? 3 : 1;
  img.width = read_header_int(in);
  img.height = read_header_int(in);
  const int maxval = read_header_int(in);
  if (img.width < 1 || img.height < 1) {
    throw std::runtime_error("pnm: bad dimensions");
  }
  if (maxval < 1 || maxval > 255) {
    throw std::runtime_error("pnm: only maxval <= 255 is supported");
  }
  in.get();  // single whitespace byte before the raster
  const std::size_t bytes =
      std::size_t(img.width) * img.height * img.channels;
  img.data.resize(bytes);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) {
    throw std::runtime_error("pnm: truncated pixel data");
  }
  return img;
}

RawImage read_pnm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pnm: cannot open '" + path + "'");
  return read_pnm(in);
}

LabelRaster labels_from_image(const RawImage& image) {
  LabelRaster raster;
  raster.width = image.width;
  raster.height = image.height;
  raster.labels.resize(std::size_t(image.width) * image.height);
  std::unordered_map<std::uint32_t, Label> codes;
  for (std::size_t p = 0; p < raster.labels.size(); ++p) {
    std::uint32_t key;
    if (image.channels == 3) {
      key = (std::uint32_t(image.data[3 * p]) << 16) |
            (std::uint32_t(image.data[3 * p + 1]) << 8) |
            image.data[3 * p + 2];
    } else {
      key = image.data[p];
    }
    auto [it, inserted] = codes.try_emplace(
        key, static_cast<Label>(codes.size()));
    if (inserted && codes.size() > 65535) {
      throw std::runtime_error("pnm: more than 65535 distinct pixel values");
    }
    raster.labels[p] = it->second;
  }
  raster.label_count = static_cast<Label>(codes.size());
  return raster;
}

std::array<std::uint8_t, 3> palette_color(Label label, int label_count) {
  if (label == 0) return {255, 255, 255};
  if (label == 1) return {0, 0, 0};
  const int hues = std::max(1, label_count - 2);
  const int hue = (int(label) - 2) * 360 / hues;  // [0, 360)
  const int sector = (hue / 60) % 6;
  const std::uint8_t t = static_cast<std::uint8_t>((hue % 60) * 255 / 60);
  const std::uint8_t q = static_cast<std::uint8_t>(255 - t);
  switch (sector) {
    case 0: return {255, t, 0};
    case 1: return {q, 255, 0};
    case 2: return {0, 255, t};
    case 3: return {0, q, 255};
    case 4: return {t, 0, 255};
    default: return {255, 0, q};
  }
}

void write_ppm(std::ostream& out, const PredictionRaster& raster,
               int label_count, std::span<const std::pair<int, int>> marks) {
  out << "P6\n" << raster.width << ' ' << raster.height << "\n255\n";
  std::vector<std::uint8_t> pixels(std::size_t(raster.width) * raster.height * 3);
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      const auto rgb = palette_color(raster.at(r, c), label_count);
      const std::size_t p = (std::size_t(r) * raster.width + c) * 3;
      pixels[p] = rgb[0];
      pixels[p + 1] = rgb[1];
      pixels[p + 2] = rgb[2];
    }
  }
  for (const auto& [r, c] : marks) {
    if (r < 0 || r >= raster.height || c < 0 || c >= raster.width) continue;
    const std::size_t p = (std::size_t(r) * raster.width + c) * 3;
    pixels[p] = 255;
    pixels[p + 1] = 0;
    pixels[p + 2] = 0;
  }
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
}

}  // namespace selsample
