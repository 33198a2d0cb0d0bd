#include "selsample/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace selsample {

double squared_distance(const Point& p, const Point& q) {
  if (p.dim != q.dim) {
    throw std::invalid_argument("distance: dimension mismatch");
  }
  const double dx = p.x - q.x;
  if (p.dim == 1) return dx * dx;
  const double dy = p.y - q.y;
  return dx * dx + dy * dy;
}

double distance(const Point& p, const Point& q) {
  return std::sqrt(squared_distance(p, q));
}

bool DomainSpace::contains(const Point& p) const {
  if (p.dim != dim_) return false;
  if (!(p.x >= 0.0 && p.x <= 1.0) || !std::isfinite(p.x)) return false;
  if (dim_ == 2 && (!(p.y >= 0.0 && p.y <= 1.0) || !std::isfinite(p.y))) {
    return false;
  }
  return true;
}

Point DomainSpace::sample(RngState& rng) const {
  if (dim_ == 1) return Point::d1(rng.uniform_double());
  const double x = rng.uniform_double();
  const double y = rng.uniform_double();
  return Point::d2(x, y);
}

TrueFunction TrueFunction::disk(double cx, double cy, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk: radius must be > 0");
  TrueFunction f;
  f.kind_ = Kind::Disk;
  f.label_count_ = 2;
  f.cx_ = cx;
  f.cy_ = cy;
  f.radius_ = radius;
  return f;
}

TrueFunction TrueFunction::checkerboard(int k) {
  if (k < 1) throw std::invalid_argument("checkerboard: k must be >= 1");
  TrueFunction f;
  f.kind_ = Kind::Checkerboard;
  f.label_count_ = 2;
  f.checker_k_ = k;
  return f;
}

TrueFunction TrueFunction::image(LabelRaster raster) {
  if (raster.width < 1 || raster.height < 1 ||
      raster.labels.size() !=
          static_cast<std::size_t>(raster.width) * raster.height) {
    throw std::invalid_argument("image: empty or inconsistent raster");
  }
  if (raster.label_count < 1) {
    throw std::invalid_argument("image: raster has no labels");
  }
  TrueFunction f;
  f.kind_ = Kind::Image;
  f.label_count_ = raster.label_count;
  f.raster_ = std::move(raster);
  return f;
}

TrueFunction TrueFunction::adversarial_1d(
    int i_max, const std::function<double(int)>& eps_rule) {
  if (i_max < 2) throw std::invalid_argument("adversarial_1d: i_max must be >= 2");
  TrueFunction f;
  f.kind_ = Kind::Adversarial1d;
  f.label_count_ = 2;
  f.i_max_ = i_max;
  f.eps_.reserve(i_max);
  for (int i = 1; i <= i_max; ++i) {
    const double eps = eps_rule(i);
    const double bound = std::ldexp(1.0, -(i + 1));
    if (!(eps > 0.0) || !(eps < bound)) {
      throw std::invalid_argument(
          "adversarial_1d: eps_rule must satisfy 0 < eps_i < 2^-(i+1)");
    }
    f.eps_.push_back(eps);
  }
  return f;
}

TrueFunction TrueFunction::adversarial_1d(int i_max) {
  return adversarial_1d(
      i_max, [](int i) { return std::ldexp(1.0, -(i + 2)); });
}

Label TrueFunction::label(const Point& p) const {
  const int want_dim = domain_dimension();
  if (p.dim != want_dim) {
    throw std::invalid_argument("label: point dimension mismatch");
  }
  if (!(p.x >= 0.0 && p.x <= 1.0) ||
      (want_dim == 2 && !(p.y >= 0.0 && p.y <= 1.0))) {
    throw std::invalid_argument("label: point outside domain bounds");
  }
  switch (kind_) {
    case Kind::Disk: {
      const double dx = p.x - cx_;
      const double dy = p.y - cy_;
      return (dx * dx + dy * dy <= radius_ * radius_) ? 1 : 0;
    }
    case Kind::Checkerboard: {
      int ix = static_cast<int>(p.x * checker_k_);
      int iy = static_cast<int>(p.y * checker_k_);
      if (ix >= checker_k_) ix = checker_k_ - 1;
      if (iy >= checker_k_) iy = checker_k_ - 1;
      return static_cast<Label>((ix + iy) & 1);
    }
    case Kind::Image: {
      int col = static_cast<int>(p.x * raster_.width);
      if (col >= raster_.width) col = raster_.width - 1;
      int row = static_cast<int>((1.0 - p.y) * raster_.height);
      if (row >= raster_.height) row = raster_.height - 1;
      return raster_.at(row, col);
    }
    case Kind::Adversarial1d: {
      if (p.x == 0.0) return 1;
      // Find the unique i with 2^-i < x; x belongs to label 1 iff it also
      // lies at or below the interval's right endpoint 3*2^-(i+1) + eps_i.
      for (int i = 1; i <= i_max_; ++i) {
        if (p.x > std::ldexp(1.0, -i)) {
          const double hi = std::ldexp(3.0, -(i + 1)) + eps_[i - 1];
          return (p.x <= hi) ? 1 : 0;
        }
      }
      return 0;  // truncated tail below 2^-i_max
    }
  }
  return 0;
}

}  // namespace selsample
