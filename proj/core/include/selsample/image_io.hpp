#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "selsample/domain.hpp"
#include "selsample/evaluation.hpp"

namespace selsample {

/// Raw pixel buffer: 1 channel (PGM) or 3 channels (PPM), 8 bits each.
struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;  // row-major, row 0 = top
};

/// Reads binary PGM (P5) or PPM (P6) with maxval <= 255. Header comments
/// (#...) are skipped. Throws std::runtime_error on malformed input.
RawImage read_pnm(std::istream& in);
RawImage read_pnm_file(const std::string& path);

/// Maps each distinct pixel value to a label code in first-seen order
/// (row-major scan from the top row).
LabelRaster labels_from_image(const RawImage& image);

/// Fixed output palette: label 0 -> white, label 1 -> black, labels >= 2 ->
/// evenly spaced hues at full saturation.
std::array<std::uint8_t, 3> palette_color(Label label, int label_count);

/// Writes a prediction raster as binary PPM (P6) using the fixed palette.
/// `marks` (row, col) pixels, if any, are painted red on top.
void write_ppm(std::ostream& out, const PredictionRaster& raster,
               int label_count,
               std::span<const std::pair<int, int>> marks = {});

}  // namespace selsample
