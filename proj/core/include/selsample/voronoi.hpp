#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "selsample/sample_set.hpp"

namespace selsample {

/// Witness that v is a Voronoi neighbor of x with respect to a sample set S:
/// a point c with d(x,c) < d(v,c) <= d(s,c) for every s in S.
struct Certificate {
  Point c;
  double d_xc = 0.0;
  double d_vc = 0.0;
  double d_sc_min = 0.0;
};

/// Incremental 2D Delaunay triangulation over sample points, used to answer
/// Voronoi-neighbor queries by the link of a transient insertion.
///
/// Geometric predicates are evaluated exactly (integer arithmetic) on
/// symbolically jittered coordinates: each vertex is displaced, inside the
/// predicates only, by a hash of its sample index scaled to about 2^-40.
/// Cocircular and collinear inputs therefore resolve deterministically and
/// identically on every platform.
///
/// With fewer than 3 points the index is in degenerate mode and neighbor
/// queries report every sample.
class VoronoiIndex {
 public:
  VoronoiIndex() = default;

  /// Builds over all samples of the view (2D points only).
  static VoronoiIndex build(SampleView z);

  /// Extends the index by one sample appended to the source set. The hash
  /// chain must be kept in step with the SampleSet it mirrors.
  void append(const LabeledSample& s);

  std::size_t point_count() const { return px_.size(); }
  std::uint64_t source_hash() const { return hash_; }
  bool degenerate() const { return px_.size() < 3; }

  /// Sample positions Delaunay-adjacent to x after a transient insertion of
  /// x, restricted to neighbors whose shared cell boundary meets the closed
  /// unit square. Computed read-only from the conflict region (the structure
  /// is not modified, so concurrent queries are safe). Ascending order.
  std::vector<std::uint32_t> neighbors(const Point& x) const;

  // Diagnostic surface (tests).
  std::size_t real_triangle_count() const;
  bool circumcircles_empty() const;
  std::vector<std::uint32_t> delaunay_vertex_neighbors(std::uint32_t vid) const;

 private:
  struct Triangle {
    std::uint32_t v[3];    // CCW; ghost triangles carry kGhost in one slot
    std::uint32_t adj[3];  // adj[k] = triangle across the edge opposite v[k]
  };

  static constexpr std::uint32_t kGhost = 0xFFFFFFFFu;
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  void insert_vertex(std::uint32_t vid);
  void bootstrap();
  bool facet_meets_domain(const Point& x, std::uint32_t v) const;
  std::uint32_t alloc_triangle(std::uint32_t a, std::uint32_t b,
                               std::uint32_t c);
  bool conflict(std::uint32_t t, std::int64_t qx, std::int64_t qy) const;
  std::uint32_t locate_conflict(std::int64_t qx, std::int64_t qy) const;
  void conflict_region(std::int64_t qx, std::int64_t qy,
                       std::vector<std::uint32_t>& cavity,
                       std::vector<std::uint8_t>& in_cavity) const;

  std::vector<double> px_, py_;
  std::vector<std::int64_t> qx_, qy_;  // quantized + jittered coordinates
  std::vector<Triangle> tris_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::uint32_t> free_;
  std::uint32_t hint_ = kNone;
  std::uint64_t hash_ = kEmptyHash;
};

/// Voronoi neighbors of x with respect to z. Returns the empty set when x
/// coincides with a sample. Throws std::invalid_argument when geom was not
/// built over exactly z (size or content-hash mismatch).
std::vector<std::uint32_t> voronoi_neighbors(const Point& x, SampleView z,
                                             const VoronoiIndex& geom);

/// Definition-based certificate search, the testing oracle for neighbor
/// adjacency. Candidate points c are tried in a fixed order: x itself, the
/// midpoints of v with every other sample, the x-v midpoint, then a
/// grid_resolution x grid_resolution lattice spanning the domain. Inequality
/// checks are exact on the evaluated distances. Returns the first witness
/// found, or nullopt ("no certificate at this resolution", which is not a
/// proof of non-adjacency).
std::optional<Certificate> certify_voronoi_neighbor(const Point& x,
                                                    std::uint32_t v_index,
                                                    SampleView z,
                                                    int grid_resolution);

}  // namespace selsample
