#include "selsample/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "selsample/predictor.hpp"
#include "selsample/threads.hpp"

namespace selsample {

ProbeSet ProbeSet::draw(const DomainSpace& domain, const TrueFunction& truth,
                        std::size_t count, std::uint64_t probe_seed) {
  if (count < 1) throw std::invalid_argument("ProbeSet: count must be >= 1");
  if (truth.domain_dimension() != domain.dimension()) {
    throw std::invalid_argument("ProbeSet: truth/domain dimension mismatch");
  }
  ProbeSet probes;
  probes.points_.reserve(count);
  probes.labels_.reserve(count);
  RngState rng = RngState::substream(probe_seed, stream_id::kProbes);
  std::uint64_t h = kEmptyHash;
  for (std::size_t i = 0; i < count; ++i) {
    const Point p = domain.sample(rng);
    const Label l = truth.label(p);
    probes.points_.push_back(p);
    probes.labels_.push_back(l);
    h = hash_append(h, LabeledSample{p, l, 0});
  }
  probes.hash_ = h;
  return probes;
}

double estimate_error(SampleView z, const ProbeSet& probes,
                      PredictionRule rule, std::uint64_t tie_seed) {
  if (probes.size() == 0) throw std::invalid_argument("estimate_error: no probes");
  if (z.size() < rule.m) {
    throw std::invalid_argument("estimate_error: fewer samples than rule.m");
  }
  std::vector<std::uint8_t> wrong(probes.size(), 0);
  parallel_for(probes.size(), [&](std::size_t i) {
    RngState rng = RngState::substream(tie_seed, i);
    const Label pred = rule.m == 1
                           ? predict_nn(probes.point(i), z, rng)
                           : predict_mnn(probes.point(i), z, rule.m, rng);
    wrong[i] = (pred != probes.label(i)) ? 1 : 0;
  });
  std::size_t sum = 0;
  for (std::uint8_t w : wrong) sum += w;
  return static_cast<double>(sum) / static_cast<double>(probes.size());
}

double estimate_q_measure(SampleView z, const HeuristicSpec& h,
                          const ProbeSet& probes) {
  if (!h.is_nmc()) {
    throw std::invalid_argument(
        "estimate_q_measure: defined for non-modal count heuristics only");
  }
  if (probes.size() == 0) {
    throw std::invalid_argument("estimate_q_measure: no probes");
  }
  VoronoiIndex geom;
  if (h.kind == HeuristicSpec::Kind::NmcVoronoi) geom = VoronoiIndex::build(z);
  std::vector<std::uint8_t> active(probes.size(), 0);
  parallel_for(probes.size(), [&](std::size_t i) {
    const std::uint32_t phi =
        h.kind == HeuristicSpec::Kind::NmcVoronoi
            ? phi_nmc_voronoi(probes.point(i), z, geom)
            : phi_nmc_knn(probes.point(i), z, h.k);
    active[i] = phi > 0 ? 1 : 0;
  });
  std::size_t sum = 0;
  for (std::uint8_t a : active) sum += a;
  return static_cast<double>(sum) / static_cast<double>(probes.size());
}

PredictionRaster raster_predict(SampleView z, int width, int height,
                                PredictionRule rule,
                                std::uint64_t raster_seed) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("raster_predict: zero raster dimensions");
  }
  if (z.size() < rule.m) {
    throw std::invalid_argument("raster_predict: fewer samples than rule.m");
  }
  PredictionRaster raster;
  raster.width = width;
  raster.height = height;
  raster.labels.assign(static_cast<std::size_t>(width) * height, 0);
  parallel_for(raster.labels.size(), [&](std::size_t idx) {
    const int row = static_cast<int>(idx) / width;
    const int col = static_cast<int>(idx) % width;
    const Point center = Point::d2((col + 0.5) / width,
                                   1.0 - (row + 0.5) / height);
    RngState rng = RngState::substream(raster_seed, idx);
    raster.labels[idx] = rule.m == 1 ? predict_nn(center, z, rng)
                                     : predict_mnn(center, z, rule.m, rng);
  });
  return raster;
}

ErrorCurve error_curve(const RunTrace& trace,
                       const std::optional<HeuristicSpec>& q_heuristic,
                       const ProbeSet& probes, std::uint32_t stride,
                       std::uint64_t tie_seed) {
  if (stride < 1) throw std::invalid_argument("error_curve: stride must be >= 1");
  const auto total = static_cast<std::uint32_t>(trace.samples.size());
  if (total == 0) return {};
  std::vector<std::uint32_t> ns;
  for (std::uint32_t n = std::max<std::uint32_t>(1, trace.initial_seed_count);
       n <= total; n += stride) {
    ns.push_back(n);
  }
  if (ns.empty() || ns.back() != total) ns.push_back(total);

  const bool want_q = q_heuristic.has_value() && q_heuristic->is_nmc();
  ErrorCurve curve;
  for (std::uint32_t n : ns) {
    CurveRow row;
    row.n = n;
    row.error = estimate_error(trace.samples.prefix(n), probes,
                               PredictionRule::nn(), tie_seed);
    if (want_q) {
      row.q_measure =
          estimate_q_measure(trace.samples.prefix(n), *q_heuristic, probes);
    }
    curve.rows.push_back(row);
  }
  return curve;
}

namespace {

/// Exact dyadic machinery for the 1D failure construction. All quantities
/// live on the grid of multiples of 2^-scale; every sample, cell midpoint
/// and label-interval endpoint is exactly representable there.
struct DyadicFailure {
  int i_max;
  int scale;  // working scale; unit = 2^-scale
  std::int64_t one;

  explicit DyadicFailure(int i_max_)
      : i_max(i_max_), scale(i_max_ + 4), one(std::int64_t(1) << scale) {}

  /// Truth label at u (in units), eps_i = 2^-(i+2).
  int label_at(std::int64_t u) const {
    if (u == 0) return 1;
    for (int i = 1; i <= i_max; ++i) {
      const std::int64_t lo = one >> i;                  // 2^-i
      if (u > lo) {
        const std::int64_t hi = std::int64_t(7) << (scale - i - 2);  // 7*2^-(i+2)
        return u <= hi ? 1 : 0;
      }
    }
    return 0;
  }

  /// Exact error measure (in units) of the nearest-neighbor prediction from
  /// the ascending samples `s` labeled by `label_at`.
  std::int64_t error_units(const std::vector<std::int64_t>& s) const {
    std::vector<std::int64_t> cuts{0, one};
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
      cuts.push_back((s[k] + s[k + 1]) / 2);
    }
    for (int i = 1; i <= i_max; ++i) {
      cuts.push_back(one >> i);
      cuts.push_back(std::int64_t(7) << (scale - i - 2));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::int64_t err = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const std::int64_t lo = cuts[j], hi = cuts[j + 1];
      const std::int64_t mid = (lo + hi) / 2;  // strictly interior, exact
      // nearest sample to mid (unique: cell walls are cut points)
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      std::size_t arg = 0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        const std::int64_t d = std::llabs(mid - s[k]);
        if (d < best) {
          best = d;
          arg = k;
        }
      }
      if (label_at(s[arg]) != label_at(mid)) err += hi - lo;
    }
    return err;
  }
};

}  // namespace

FailureDemoResult failure_demo(int i_max, int n_steps, std::size_t mc_probes,
                               std::uint64_t seed) {
  if (i_max < 4) throw std::invalid_argument("failure_demo: i_max must be >= 4");
  if (n_steps < 2 || n_steps > i_max - 2) {
    throw std::invalid_argument("failure_demo: need 2 <= n_steps <= i_max - 2");
  }
  if (mc_probes < 1) throw std::invalid_argument("failure_demo: need probes");

  const DyadicFailure exact(i_max);
  const DomainSpace domain = DomainSpace::unit_interval();
  const TrueFunction truth = TrueFunction::adversarial_1d(i_max);
  const ProbeSet probes = ProbeSet::draw(domain, truth, mc_probes, seed);
  const std::uint64_t tie_seed = derive_seed(seed, stream_id::kEval);

  SampleSet samples;
  std::vector<std::int64_t> sample_units;
  auto add = [&](double x, std::int64_t units) {
    samples.append(Point::d1(x), truth.label(Point::d1(x)));
    sample_units.push_back(units);
    std::sort(sample_units.begin(), sample_units.end());
  };

  FailureDemoResult result;
  result.strictly_increasing = true;
  result.increments_ok = true;
  std::int64_t prev_units = 0;
  for (int n = 1; n <= n_steps; ++n) {
    if (n == 1) {
      add(0.0, 0);
    } else {
      add(std::ldexp(1.0, 2 - n), exact.one >> (n - 2));
    }
    FailureDemoRow row;
    row.n = n;
    row.analytic_num = exact.error_units(sample_units);
    row.analytic_scale = exact.scale;
    row.analytic_error = std::ldexp(double(row.analytic_num), -exact.scale);
    row.mc_error = estimate_error(samples.view(), probes,
                                  PredictionRule::nn(), tie_seed);
    if (n >= 2) {
      const std::int64_t gain = row.analytic_num - prev_units;
      if (gain <= 0) result.strictly_increasing = false;
      if (gain < (std::int64_t(1) << (exact.scale - (n + 1)))) {
        result.increments_ok = false;
      }
    }
    prev_units = row.analytic_num;
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace selsample
