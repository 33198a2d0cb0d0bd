#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "selsample/rng.hpp"

namespace selsample {

/// A point of the unit interval (dim 1) or unit square (dim 2).
struct Point {
  double x = 0.0;
  double y = 0.0;
  std::uint8_t dim = 2;

  static Point d1(double x) { return Point{x, 0.0, 1}; }
  static Point d2(double x, double y) { return Point{x, y, 2}; }

  /// Exact coordinate equality; this is the tie/"already sampled" notion
  /// used throughout.
  bool operator==(const Point& o) const {
    return dim == o.dim && x == o.x && (dim == 1 || y == o.y);
  }
};

/// Label code. Codes are dense: 0 <= value < label_count of the labeling
/// function in play.
using Label = std::uint16_t;

/// Euclidean distance. Throws std::invalid_argument on dimension mismatch.
double distance(const Point& p, const Point& q);

/// Squared Euclidean distance; the comparison workhorse for nearest-neighbor
/// queries (monotone in distance, avoids the square root).
double squared_distance(const Point& p, const Point& q);

/// Domain space: unit interval or unit square with the Euclidean metric and
/// the uniform probability measure. Immutable; safe for concurrent reads.
class DomainSpace {
 public:
  static DomainSpace unit_interval() { return DomainSpace(1); }
  static DomainSpace unit_square() { return DomainSpace(2); }

  int dimension() const { return dim_; }
  bool contains(const Point& p) const;

  /// One draw from the uniform measure; consumes exactly `dimension()` raw
  /// rng draws.
  Point sample(RngState& rng) const;

 private:
  explicit DomainSpace(int dim) : dim_(dim) {}
  int dim_;
};

/// A grid of label codes covering the unit square (row 0 = top).
struct LabelRaster {
  int width = 0;
  int height = 0;
  std::vector<Label> labels;  // row-major
  Label label_count = 0;

  Label at(int row, int col) const {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
};

/// Deterministic ground-truth labeling function over a domain.
///
/// Variants: disk (inside/outside a disk), checkerboard (k x k parity),
/// image (label of the pixel cell containing the point, row 0 = top), and
/// a 1D construction whose label-1 set is {0} together with the intervals
/// (2^-i, 3*2^-(i+1) + eps_i] for 1 <= i <= i_max.
class TrueFunction {
 public:
  enum class Kind { Disk, Checkerboard, Image, Adversarial1d };

  static TrueFunction disk(double cx, double cy, double radius);
  static TrueFunction checkerboard(int k);
  static TrueFunction image(LabelRaster raster);

  /// eps_rule(i) must satisfy 0 < eps_i < 2^-(i+1) for every i <= i_max;
  /// otherwise std::invalid_argument. Requires i_max >= 2. Points in
  /// (0, 2^-i_max] get label 0 (truncation); f(0) = 1.
  static TrueFunction adversarial_1d(int i_max,
                                     const std::function<double(int)>& eps_rule);
  /// Default rule eps_i = 2^-(i+2).
  static TrueFunction adversarial_1d(int i_max = 20);

  Kind kind() const { return kind_; }
  int label_count() const { return label_count_; }
  /// Dimension of the domain this function is defined on (1 or 2).
  int domain_dimension() const { return kind_ == Kind::Adversarial1d ? 1 : 2; }

  /// Label of p. Throws std::invalid_argument if p lies outside the unit
  /// bounds or has the wrong dimension. Pure: repeated calls agree exactly.
  Label label(const Point& p) const;

 private:
  TrueFunction() = default;

  Kind kind_ = Kind::Disk;
  int label_count_ = 2;
  // disk
  double cx_ = 0.5, cy_ = 0.5, radius_ = 0.25;
  // checkerboard
  int checker_k_ = 2;
  // image
  LabelRaster raster_;
  // adversarial 1d
  int i_max_ = 20;
  std::vector<double> eps_;  // eps_[i-1] = eps_i, i = 1..i_max
};

}  // namespace selsample
