#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "selsample/predictor.hpp"
#include "selsample/sample_set.hpp"
#include "selsample/voronoi.hpp"

namespace selsample {

/// Which selection heuristic scores candidates during sampling.
struct HeuristicSpec {
  enum class Kind { Distance, NmcKnn, NmcVoronoi };

  Kind kind = Kind::Distance;
  std::uint32_t k = 6;  // NmcKnn only; >= 2

  static HeuristicSpec distance() { return {Kind::Distance, 0}; }
  static HeuristicSpec nmc_knn(std::uint32_t k);
  static HeuristicSpec nmc_voronoi() { return {Kind::NmcVoronoi, 0}; }

  /// Default neighbor counts per domain dimension (expected Voronoi degree):
  /// 2 in 1D, 6 in 2D.
  static std::uint32_t default_k(int dimension) { return dimension == 1 ? 2 : 6; }

  bool is_nmc() const { return kind != Kind::Distance; }
  std::string selector() const;

  bool operator==(const HeuristicSpec&) const = default;
};

/// Distance from x to the sample set; +infinity for an empty set.
double phi_distance(const Point& x, SampleView z);

/// Multiset size minus the multiplicity of its most common label
/// (0 for the empty multiset).
std::uint32_t nonmodal_count(std::span<const Label> labels);

/// Non-modal count of the ambiguous K-set of nearest samples. Zero when x
/// coincides with a sample. When fewer than K samples exist, K shrinks to
/// |z| so the score is defined from the first step.
std::uint32_t phi_nmc_knn(const Point& x, SampleView z, std::uint32_t k);

/// Non-modal count over the labels of the Voronoi neighbors of x. Zero when
/// x coincides with a sample. Throws when geom does not match z.
std::uint32_t phi_nmc_voronoi(const Point& x, SampleView z,
                              const VoronoiIndex& geom);

/// Dispatch for the sampling loop. geom is required for NmcVoronoi and
/// ignored otherwise. Non-modal counts are returned as exact small integers
/// widened to double; a run fixes one heuristic, so mixed comparisons never
/// occur.
double phi_value(const HeuristicSpec& h, const Point& x, SampleView z,
                 const VoronoiIndex* geom);

}  // namespace selsample
