#include "selsample/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

namespace selsample {

namespace {

using int256 = boost::multiprecision::int256_t;

// Coordinates enter the predicates as integers on a 2^-61 grid, plus a
// per-vertex jitter in [0, 2^21) grid units (about [0, 2^-40) in domain
// units). Everything downstream is exact integer arithmetic.
constexpr int kQuantBits = 61;
constexpr std::uint32_t kQueryJitterKey = 0xFFFFFFFEu;

std::int64_t quantize(double v) {
  return std::llround(std::ldexp(v, kQuantBits));
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t jitter_units(std::uint32_t index, int axis) {
  return static_cast<std::int64_t>(
      mix64((std::uint64_t(index) << 1) | std::uint64_t(axis)) & 0x1FFFFFu);
}

/// Sign of the orientation determinant; > 0 iff (a,b,c) is counterclockwise.
int orient2d(std::int64_t ax, std::int64_t ay, std::int64_t bx,
             std::int64_t by, std::int64_t cx, std::int64_t cy) {
  const __int128 det = static_cast<__int128>(bx - ax) * (cy - ay) -
                       static_cast<__int128>(by - ay) * (cx - ax);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

/// Sign of the in-circle determinant; > 0 iff d lies strictly inside the
/// circumcircle of the counterclockwise triangle (a,b,c).
int incircle(std::int64_t ax, std::int64_t ay, std::int64_t bx,
             std::int64_t by, std::int64_t cx, std::int64_t cy,
             std::int64_t dx, std::int64_t dy) {
  const std::int64_t adx = ax - dx, ady = ay - dy;
  const std::int64_t bdx = bx - dx, bdy = by - dy;
  const std::int64_t cdx = cx - dx, cdy = cy - dy;
  const int256 ad2 = int256(adx) * adx + int256(ady) * ady;
  const int256 bd2 = int256(bdx) * bdx + int256(bdy) * bdy;
  const int256 cd2 = int256(cdx) * cdx + int256(cdy) * cdy;
  const int256 det = int256(adx) * (int256(bdy) * cd2 - bd2 * cdy) -
                     int256(ady) * (int256(bdx) * cd2 - bd2 * cdx) +
                     ad2 * (int256(bdx) * cdy - int256(bdy) * cdx);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

}  // namespace

VoronoiIndex VoronoiIndex::build(SampleView z) {
  VoronoiIndex idx;
  for (const LabeledSample& s : z) idx.append(s);
  return idx;
}

void VoronoiIndex::append(const LabeledSample& s) {
  if (s.point.dim != 2) {
    throw std::invalid_argument("VoronoiIndex: 2D points required");
  }
  const auto vid = static_cast<std::uint32_t>(px_.size());
  px_.push_back(s.point.x);
  py_.push_back(s.point.y);
  qx_.push_back(quantize(s.point.x) + jitter_units(vid, 0));
  qy_.push_back(quantize(s.point.y) + jitter_units(vid, 1));
  hash_ = hash_append(hash_, s);
  if (px_.size() == 3) {
    bootstrap();
  } else if (px_.size() > 3) {
    insert_vertex(vid);
  }
}

std::uint32_t VoronoiIndex::alloc_triangle(std::uint32_t a, std::uint32_t b,
                                           std::uint32_t c) {
  std::uint32_t id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
    alive_[id] = 1;
  } else {
    id = static_cast<std::uint32_t>(tris_.size());
    tris_.push_back({});
    alive_.push_back(1);
  }
  tris_[id].v[0] = a;
  tris_[id].v[1] = b;
  tris_[id].v[2] = c;
  tris_[id].adj[0] = tris_[id].adj[1] = tris_[id].adj[2] = kNone;
  return id;
}

void VoronoiIndex::bootstrap() {
  std::uint32_t a = 0, b = 1, c = 2;
  const int o = orient2d(qx_[a], qy_[a], qx_[b], qy_[b], qx_[c], qy_[c]);
  if (o == 0) throw std::logic_error("VoronoiIndex: jittered predicate degenerate");
  if (o < 0) std::swap(b, c);

  // One real triangle plus a ghost per hull edge. A ghost (u,v,G) stands in
  // for the open half plane strictly left of the directed edge u->v, which
  // runs along the hull with the interior on its right.
  const std::uint32_t t = alloc_triangle(a, b, c);
  const std::uint32_t gab = alloc_triangle(b, a, kGhost);
  const std::uint32_t gbc = alloc_triangle(c, b, kGhost);
  const std::uint32_t gca = alloc_triangle(a, c, kGhost);
  tris_[t].adj[0] = gbc;  // edge (b,c)
  tris_[t].adj[1] = gca;  // edge (c,a)
  tris_[t].adj[2] = gab;  // edge (a,b)
  tris_[gab].adj[2] = t;
  tris_[gbc].adj[2] = t;
  tris_[gca].adj[2] = t;
  // Ghost fan links across the shared (vertex, G) edges.
  tris_[gab].adj[0] = gca;  // edge (a,G)
  tris_[gab].adj[1] = gbc;  // edge (G,b)
  tris_[gbc].adj[0] = gab;  // edge (b,G)
  tris_[gbc].adj[1] = gca;  // edge (G,c)
  tris_[gca].adj[0] = gbc;  // edge (c,G)
  tris_[gca].adj[1] = gab;  // edge (G,a)
  hint_ = t;
}

bool VoronoiIndex::conflict(std::uint32_t t, std::int64_t qx,
                            std::int64_t qy) const {
  const Triangle& tr = tris_[t];
  for (int k = 0; k < 3; ++k) {
    if (tr.v[k] == kGhost) {
      const std::uint32_t a = tr.v[(k + 1) % 3];
      const std::uint32_t b = tr.v[(k + 2) % 3];
      return orient2d(qx_[a], qy_[a], qx_[b], qy_[b], qx, qy) > 0;
    }
  }
  return incircle(qx_[tr.v[0]], qy_[tr.v[0]], qx_[tr.v[1]], qy_[tr.v[1]],
                  qx_[tr.v[2]], qy_[tr.v[2]], qx, qy) > 0;
}

std::uint32_t VoronoiIndex::locate_conflict(std::int64_t qx,
                                            std::int64_t qy) const {
  std::uint32_t t = hint_;
  if (t == kNone || t >= tris_.size() || !alive_[t]) {
    t = kNone;
    for (std::uint32_t i = 0; i < tris_.size(); ++i) {
      if (alive_[i]) {
        t = i;
        break;
      }
    }
  }
  // Start from a real triangle.
  for (int k = 0; k < 3; ++k) {
    if (tris_[t].v[k] == kGhost) {
      t = tris_[t].adj[k];
      break;
    }
  }
  std::size_t steps_left = 4 * tris_.size() + 16;
  while (steps_left-- > 0) {
    const Triangle& tr = tris_[t];
    bool is_ghost = false;
    for (int k = 0; k < 3; ++k) is_ghost |= (tr.v[k] == kGhost);
    if (is_ghost) {
      // We stepped beyond a hull edge; that ghost's half plane contains q.
      return t;
    }
    const std::uint32_t a = tr.v[0], b = tr.v[1], c = tr.v[2];
    if (orient2d(qx_[a], qy_[a], qx_[b], qy_[b], qx, qy) < 0) {
      t = tr.adj[2];
    } else if (orient2d(qx_[b], qy_[b], qx_[c], qy_[c], qx, qy) < 0) {
      t = tr.adj[0];
    } else if (orient2d(qx_[c], qy_[c], qx_[a], qy_[a], qx, qy) < 0) {
      t = tr.adj[1];
    } else {
      return t;  // q inside this triangle, hence inside its circumcircle
    }
  }
  // The walk should terminate on a Delaunay triangulation; scan as a guard.
  for (std::uint32_t i = 0; i < tris_.size(); ++i) {
    if (alive_[i] && conflict(i, qx, qy)) return i;
  }
  throw std::logic_error("VoronoiIndex: no conflicting triangle found");
}

void VoronoiIndex::conflict_region(std::int64_t qx, std::int64_t qy,
                                   std::vector<std::uint32_t>& cavity,
                                   std::vector<std::uint8_t>& in_cavity) const {
  const std::uint32_t seed0 = locate_conflict(qx, qy);
  std::uint32_t seed = seed0;
  if (!conflict(seed, qx, qy)) {
    seed = kNone;
    for (std::uint32_t i = 0; i < tris_.size(); ++i) {
      if (alive_[i] && conflict(i, qx, qy)) {
        seed = i;
        break;
      }
    }
    if (seed == kNone) {
      throw std::logic_error("VoronoiIndex: query coincides with a vertex");
    }
  }
  cavity.clear();
  in_cavity.assign(tris_.size(), 0);
  std::vector<std::uint8_t> visited(tris_.size(), 0);
  cavity.push_back(seed);
  visited[seed] = in_cavity[seed] = 1;
  for (std::size_t i = 0; i < cavity.size(); ++i) {
    const Triangle& tr = tris_[cavity[i]];
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t nb = tr.adj[k];
      if (visited[nb]) continue;
      visited[nb] = 1;
      if (conflict(nb, qx, qy)) {
        in_cavity[nb] = 1;
        cavity.push_back(nb);
      }
    }
  }
}

void VoronoiIndex::insert_vertex(std::uint32_t vid) {
  std::vector<std::uint32_t> cavity;
  std::vector<std::uint8_t> in_cavity;
  conflict_region(qx_[vid], qy_[vid], cavity, in_cavity);

  struct BoundaryEdge {
    std::uint32_t u, w, outside, outside_slot;
  };
  std::vector<BoundaryEdge> edges;
  for (std::uint32_t t : cavity) {
    const Triangle& tr = tris_[t];
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t nb = tr.adj[k];
      if (in_cavity[nb]) continue;
      std::uint32_t slot = 3;
      for (std::uint32_t k2 = 0; k2 < 3; ++k2) {
        if (tris_[nb].adj[k2] == t) slot = k2;
      }
      edges.push_back({tr.v[(k + 1) % 3], tr.v[(k + 2) % 3], nb, slot});
    }
  }

  for (std::uint32_t t : cavity) {
    alive_[t] = 0;
    free_.push_back(t);
  }

  // One new triangle (u, w, vid) per boundary edge; the boundary cycle
  // visits each endpoint once, so start/end maps identify the siblings.
  std::unordered_map<std::uint32_t, std::uint32_t> by_start, by_end;
  std::vector<std::uint32_t> created(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::uint32_t id = alloc_triangle(edges[i].u, edges[i].w, vid);
    tris_[id].adj[2] = edges[i].outside;
    tris_[edges[i].outside].adj[edges[i].outside_slot] = id;
    by_start[edges[i].u] = id;
    by_end[edges[i].w] = id;
    created[i] = id;
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    tris_[created[i]].adj[0] = by_start.at(edges[i].w);  // edge (w, vid)
    tris_[created[i]].adj[1] = by_end.at(edges[i].u);    // edge (vid, u)
  }
  hint_ = created[0];
  for (std::uint32_t id : created) {
    if (tris_[id].v[0] != kGhost && tris_[id].v[1] != kGhost) {
      hint_ = id;
      break;
    }
  }
}

bool VoronoiIndex::facet_meets_domain(const Point& x, std::uint32_t v) const {
  // The shared cell boundary of x and v after inserting x is the part of
  // their bisector where v is weakly nearest among the samples. Intersect
  // the 1D constraints along the bisector line with the unit square; if any
  // in-domain witness c exists, the segment c -> v crosses the bisector
  // inside v's (convex) cell without leaving the square, so this test never
  // rejects a certifiable neighbor.
  const double vx = px_[v], vy = py_[v];
  const double mx = 0.5 * (x.x + vx), my = 0.5 * (x.y + vy);
  double ux = -(vy - x.y), uy = vx - x.x;
  const double norm = std::sqrt(ux * ux + uy * uy);
  if (norm == 0.0) return true;
  ux /= norm;
  uy /= norm;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  auto constrain = [&](double a, double b) {
    // a + b t <= 0
    if (b > 0) {
      hi = std::min(hi, -a / b);
    } else if (b < 0) {
      lo = std::max(lo, -a / b);
    } else if (a > 1e-12) {
      lo = 1.0;
      hi = 0.0;
    }
  };
  for (std::size_t s = 0; s < px_.size(); ++s) {
    if (s == v) continue;
    const double dv2 = (mx - vx) * (mx - vx) + (my - vy) * (my - vy);
    const double ds2 = (mx - px_[s]) * (mx - px_[s]) + (my - py_[s]) * (my - py_[s]);
    const double a = dv2 - ds2;
    const double b = 2 * ((mx - vx) * ux + (my - vy) * uy) -
                     2 * ((mx - px_[s]) * ux + (my - py_[s]) * uy);
    constrain(a, b);
  }
  constrain(-mx, -ux);        // c_x >= 0
  constrain(mx - 1.0, ux);    // c_x <= 1
  constrain(-my, -uy);        // c_y >= 0
  constrain(my - 1.0, uy);    // c_y <= 1
  return lo <= hi + 1e-9;
}

std::vector<std::uint32_t> VoronoiIndex::neighbors(const Point& x) const {
  const std::size_t n = px_.size();
  std::vector<std::uint32_t> out;
  if (degenerate()) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(i);
    return out;
  }
  const std::int64_t qx = quantize(x.x) + jitter_units(kQueryJitterKey, 0);
  const std::int64_t qy = quantize(x.y) + jitter_units(kQueryJitterKey, 1);
  std::vector<std::uint32_t> cavity;
  std::vector<std::uint8_t> in_cavity;
  conflict_region(qx, qy, cavity, in_cavity);
  // After inserting x, its Delaunay link is exactly the boundary of the
  // conflict region; since Delaunay circumdisks are empty of vertices, every
  // vertex of a conflicting triangle lies on that boundary.
  for (std::uint32_t t : cavity) {
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t v = tris_[t].v[k];
      if (v != kGhost) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](std::uint32_t v) { return !facet_meets_domain(x, v); });
  return out;
}

std::size_t VoronoiIndex::real_triangle_count() const {
  std::size_t n = 0;
  for (std::uint32_t i = 0; i < tris_.size(); ++i) {
    if (!alive_[i]) continue;
    bool ghost = false;
    for (int k = 0; k < 3; ++k) ghost |= (tris_[i].v[k] == kGhost);
    n += !ghost;
  }
  return n;
}

bool VoronoiIndex::circumcircles_empty() const {
  for (std::uint32_t t = 0; t < tris_.size(); ++t) {
    if (!alive_[t]) continue;
    const Triangle& tr = tris_[t];
    bool ghost = false;
    for (int k = 0; k < 3; ++k) ghost |= (tr.v[k] == kGhost);
    if (ghost) continue;
    for (std::uint32_t v = 0; v < px_.size(); ++v) {
      if (v == tr.v[0] || v == tr.v[1] || v == tr.v[2]) continue;
      if (incircle(qx_[tr.v[0]], qy_[tr.v[0]], qx_[tr.v[1]], qy_[tr.v[1]],
                   qx_[tr.v[2]], qy_[tr.v[2]], qx_[v], qy_[v]) > 0) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::uint32_t> VoronoiIndex::delaunay_vertex_neighbors(
    std::uint32_t vid) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t t = 0; t < tris_.size(); ++t) {
    if (!alive_[t]) continue;
    const Triangle& tr = tris_[t];
    if (tr.v[0] != vid && tr.v[1] != vid && tr.v[2] != vid) continue;
    for (int k = 0; k < 3; ++k) {
      if (tr.v[k] != vid && tr.v[k] != kGhost) out.push_back(tr.v[k]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint32_t> voronoi_neighbors(const Point& x, SampleView z,
                                             const VoronoiIndex& geom) {
  if (geom.point_count() != z.size() || geom.source_hash() != z.hash) {
    throw std::invalid_argument("voronoi_neighbors: index is stale for this set");
  }
  if (contains_point(z, x)) return {};
  return geom.neighbors(x);
}

std::optional<Certificate> certify_voronoi_neighbor(const Point& x,
                                                    std::uint32_t v_index,
                                                    SampleView z,
                                                    int grid_resolution) {
  if (v_index >= z.size()) {
    throw std::invalid_argument("certify_voronoi_neighbor: bad sample index");
  }
  if (grid_resolution < 2) {
    throw std::invalid_argument("certify_voronoi_neighbor: resolution too small");
  }
  const Point v = z[v_index].point;

  auto witness = [&](const Point& c) -> std::optional<Certificate> {
    const double dxc2 = squared_distance(x, c);
    const double dvc2 = squared_distance(v, c);
    if (!(dxc2 < dvc2)) return std::nullopt;
    double dsc2_min = dvc2;
    for (const LabeledSample& s : z) {
      const double d2 = squared_distance(s.point, c);
      if (d2 < dvc2) return std::nullopt;
      dsc2_min = std::min(dsc2_min, d2);
    }
    return Certificate{c, std::sqrt(dxc2), std::sqrt(dvc2),
                       std::sqrt(dsc2_min)};
  };

  if (auto cert = witness(x)) return cert;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i == v_index) continue;
    const Point& s = z[i].point;
    Point mid = v;
    mid.x = 0.5 * (v.x + s.x);
    if (v.dim == 2) mid.y = 0.5 * (v.y + s.y);
    if (auto cert = witness(mid)) return cert;
  }
  {
    Point mid = x;
    mid.x = 0.5 * (x.x + v.x);
    if (x.dim == 2) mid.y = 0.5 * (x.y + v.y);
    if (auto cert = witness(mid)) return cert;
  }
  const int r = grid_resolution;
  if (x.dim == 1) {
    for (int i = 0; i < r; ++i) {
      if (auto cert = witness(Point::d1(double(i) / (r - 1)))) return cert;
    }
    return std::nullopt;
  }
  for (int iy = 0; iy < r; ++iy) {
    const double cy = double(iy) / (r - 1);
    for (int ix = 0; ix < r; ++ix) {
      if (auto cert = witness(Point::d2(double(ix) / (r - 1), cy))) return cert;
    }
  }
  return std::nullopt;
}

}  // namespace selsample
