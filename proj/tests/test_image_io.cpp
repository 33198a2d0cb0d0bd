#include <stdexcept>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "selsample/image_io.hpp"

using namespace selsample;

TEST_CASE("ppm write/read round-trip through the label mapping") {
  PredictionRaster raster;
  raster.width = 3;
  raster.height = 2;
  raster.labels = {0, 1, 0, 1, 2, 0};
  std::ostringstream out;
  write_ppm(out, raster, 3);

  std::istringstream in(out.str());
  const RawImage img = read_pnm(in);
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.channels == 3);
  // First-seen order reproduces the original codes because label 0 comes
  // first in this raster.
  const LabelRaster labels = labels_from_image(img);
  CHECK(labels.label_count == 3);
  CHECK(labels.labels == raster.labels);
}

TEST_CASE("pgm parsing with header comments") {
  const std::string payload = "P5\n# a comment\n2 2\n255\n\x0a\x0a\x14\x14";
  std::istringstream in(payload);
  const RawImage img = read_pnm(in);
  CHECK(img.channels == 1);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  const LabelRaster labels = labels_from_image(img);
  CHECK(labels.label_count == 2);
  CHECK(labels.labels == std::vector<Label>{0, 0, 1, 1});
}

TEST_CASE("first-seen order assigns codes") {
  RawImage img;
  img.width = 4;
  img.height = 1;
  img.channels = 1;
  img.data = {10, 20, 10, 30};
  const LabelRaster labels = labels_from_image(img);
  CHECK(labels.labels == std::vector<Label>{0, 1, 0, 2});
  CHECK(labels.label_count == 3);
}

TEST_CASE("malformed inputs are rejected") {
  {
    std::istringstream in("P3\n1 1\n255\n0 0 0\n");
    CHECK_THROWS_AS(read_pnm(in), std::runtime_error);
  }
  {
    std::istringstream in("P5\n2 2\n65535\n");
    CHECK_THROWS_AS(read_pnm(in), std::runtime_error);
  }
  {
    std::istringstream in(std::string("P6\n4 4\n255\n") + "abc");
    CHECK_THROWS_AS(read_pnm(in), std::runtime_error);
  }
  CHECK_THROWS_AS(read_pnm_file("/nonexistent/image.ppm"), std::runtime_error);
}

TEST_CASE("palette colors") {
  CHECK(palette_color(0, 4) == std::array<std::uint8_t, 3>{255, 255, 255});
  CHECK(palette_color(1, 4) == std::array<std::uint8_t, 3>{0, 0, 0});
  CHECK(palette_color(2, 4) == std::array<std::uint8_t, 3>{255, 0, 0});
  CHECK(palette_color(3, 4) == std::array<std::uint8_t, 3>{0, 255, 255});
}

TEST_CASE("sample marks are painted over the palette") {
  PredictionRaster raster;
  raster.width = 2;
  raster.height = 2;
  raster.labels = {0, 0, 0, 0};
  const std::vector<std::pair<int, int>> marks{{1, 1}};
  std::ostringstream out;
  write_ppm(out, raster, 2, marks);
  const std::string bytes = out.str();
  const std::size_t data = bytes.size() - 12;  // 4 pixels * 3 bytes
  CHECK(static_cast<unsigned char>(bytes[data + 9]) == 255);
  CHECK(static_cast<unsigned char>(bytes[data + 10]) == 0);
  CHECK(static_cast<unsigned char>(bytes[data + 11]) == 0);
}

TEST_CASE("image truth from a synthetic blob raster") {
  const LabelRaster blob = selsample::testing::blob_raster(64, 64);
  const TrueFunction truth = TrueFunction::image(blob);
  CHECK(truth.label_count() == 2);
  CHECK(truth.label(Point::d2(0.5, 0.4)) == 1);   // inside the bar
  CHECK(truth.label(Point::d2(0.05, 0.05)) == 0);  // far corner
}
