#include "selsample/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace selsample {

HeuristicSpec HeuristicSpec::nmc_knn(std::uint32_t k) {
  if (k < 2) throw std::invalid_argument("nmc_knn: k must be >= 2");
  return {Kind::NmcKnn, k};
}

std::string HeuristicSpec::selector() const {
  switch (kind) {
    case Kind::Distance:
      return "dist";
    case Kind::NmcKnn:
      return "nmc-knn:" + std::to_string(k);
    case Kind::NmcVoronoi:
      return "nmc-vor";
  }
  return "?";
}

double phi_distance(const Point& x, SampleView z) {
  if (z.empty()) return std::numeric_limits<double>::infinity();
  double best = squared_distance(x, z[0].point);
  for (std::size_t i = 1; i < z.size(); ++i) {
    best = std::min(best, squared_distance(x, z[i].point));
  }
  return std::sqrt(best);
}

std::uint32_t nonmodal_count(std::span<const Label> labels) {
  if (labels.empty()) return 0;
  std::vector<std::uint32_t> counts;
  std::uint32_t max_mult = 0;
  for (Label l : labels) {
    if (l >= counts.size()) counts.resize(l + 1, 0);
    max_mult = std::max(max_mult, ++counts[l]);
  }
  return static_cast<std::uint32_t>(labels.size()) - max_mult;
}

std::uint32_t phi_nmc_knn(const Point& x, SampleView z, std::uint32_t k) {
  if (z.empty()) return 0;
  if (contains_point(z, x)) return 0;
  const auto k_eff = std::min<std::uint32_t>(k, static_cast<std::uint32_t>(z.size()));
  const TieFamily family = k_nearest_tie_family(x, z, k_eff);
  return k_eff - min_mode_frequency(family, z);
}

std::uint32_t phi_nmc_voronoi(const Point& x, SampleView z,
                              const VoronoiIndex& geom) {
  if (geom.point_count() != z.size() || geom.source_hash() != z.hash) {
    throw std::invalid_argument("phi_nmc_voronoi: index is stale for this set");
  }
  if (z.empty()) return 0;
  if (contains_point(z, x)) return 0;
  const auto nbrs = geom.neighbors(x);
  std::vector<Label> labels;
  labels.reserve(nbrs.size());
  for (std::uint32_t i : nbrs) labels.push_back(z[i].label);
  return nonmodal_count(labels);
}

double phi_value(const HeuristicSpec& h, const Point& x, SampleView z,
                 const VoronoiIndex* geom) {
  switch (h.kind) {
    case HeuristicSpec::Kind::Distance:
      return phi_distance(x, z);
    case HeuristicSpec::Kind::NmcKnn:
      return phi_nmc_knn(x, z, h.k);
    case HeuristicSpec::Kind::NmcVoronoi:
      if (geom == nullptr) {
        throw std::invalid_argument("phi_value: nmc-vor requires a VoronoiIndex");
      }
      return phi_nmc_voronoi(x, z, *geom);
  }
  return 0.0;
}

}  // namespace selsample
