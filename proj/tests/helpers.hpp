#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "selsample/domain.hpp"
#include "selsample/predictor.hpp"
#include "selsample/sample_set.hpp"

namespace selsample::testing {

/// Brute-force ranking of every K-subset of z by its sorted squared-distance
/// vector (lexicographic). Independent oracle for the tie-family and
/// ambiguous-set machinery.
struct BruteKnn {
  std::vector<double> best_profile;  // lexicographically minimal profile
  std::uint32_t min_modefreq = 0;    // minimum over profile-optimal subsets
  std::vector<std::vector<std::uint32_t>> optimal_sets;  // each ascending
};

inline std::uint32_t mode_frequency(const std::vector<std::uint32_t>& subset,
                                    SampleView z) {
  std::vector<std::uint32_t> counts;
  std::uint32_t best = 0;
  for (std::uint32_t i : subset) {
    const Label l = z[i].label;
    if (l >= counts.size()) counts.resize(l + 1, 0);
    best = std::max(best, ++counts[l]);
  }
  return best;
}

inline BruteKnn brute_knn(const Point& x, SampleView z, std::uint32_t k) {
  const std::size_t n = z.size();
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x, z[i].point);

  BruteKnn result;
  std::vector<std::uint32_t> subset(k);
  for (std::size_t i = 0; i < k; ++i) subset[i] = static_cast<std::uint32_t>(i);
  while (true) {
    std::vector<double> profile(k);
    for (std::size_t i = 0; i < k; ++i) profile[i] = d2[subset[i]];
    std::sort(profile.begin(), profile.end());
    if (result.optimal_sets.empty() || profile < result.best_profile) {
      result.best_profile = profile;
      result.optimal_sets.clear();
      result.optimal_sets.push_back(subset);
    } else if (profile == result.best_profile) {
      result.optimal_sets.push_back(subset);
    }
    std::size_t i = k;
    while (i > 0 && subset[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  result.min_modefreq = UINT32_MAX;
  for (const auto& s : result.optimal_sets) {
    result.min_modefreq = std::min(result.min_modefreq, mode_frequency(s, z));
  }
  return result;
}

/// Enumerates the members of a TieFamily as ascending index vectors.
inline std::vector<std::vector<std::uint32_t>> enumerate_family(
    const TieFamily& family) {
  std::vector<std::vector<std::uint32_t>> members;
  const std::size_t t = family.tie_group.size();
  const std::size_t f = family.free_slots;
  std::vector<std::uint32_t> pick(f);
  for (std::size_t i = 0; i < f; ++i) pick[i] = static_cast<std::uint32_t>(i);
  while (true) {
    std::vector<std::uint32_t> member = family.prefix;
    for (std::uint32_t p : pick) member.push_back(family.tie_group[p]);
    std::sort(member.begin(), member.end());
    members.push_back(member);
    if (f == 0) break;
    std::size_t i = f;
    while (i > 0 && pick[i - 1] == t - f + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < f; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(members.begin(), members.end());
  return members;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

/// Two-label raster with a blob-shaped label-1 region (two lobes and a bar),
/// standing in for an external test image.
inline LabelRaster blob_raster(int w, int h) {
  LabelRaster raster;
  raster.width = w;
  raster.height = h;
  raster.label_count = 2;
  raster.labels.resize(static_cast<std::size_t>(w) * h);
  auto inside = [](double x, double y) {
    const double dl = (x - 0.35) * (x - 0.35) + (y - 0.58) * (y - 0.58);
    const double dr = (x - 0.65) * (x - 0.65) + (y - 0.58) * (y - 0.58);
    const bool bar = x > 0.30 && x < 0.70 && y > 0.25 && y < 0.48;
    return dl < 0.18 * 0.18 || dr < 0.18 * 0.18 || bar;
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double x = (c + 0.5) / w;
      const double y = 1.0 - (r + 0.5) / h;
      raster.labels[static_cast<std::size_t>(r) * w + c] = inside(x, y) ? 1 : 0;
    }
  }
  return raster;
}

}  // namespace selsample::testing
