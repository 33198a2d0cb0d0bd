#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "selsample/domain.hpp"
#include "selsample/heuristics.hpp"
#include "selsample/sampler.hpp"

namespace selsample {

/// Fixed set of labeled probe points used for Monte Carlo estimates. One
/// probe set is drawn per experiment and reused across every evaluation in
/// it (common random numbers), which the content hash makes auditable.
class ProbeSet {
 public:
  static ProbeSet draw(const DomainSpace& domain, const TrueFunction& truth,
                       std::size_t count, std::uint64_t probe_seed);

  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  Label label(std::size_t i) const { return labels_[i]; }
  std::uint64_t content_hash() const { return hash_; }

 private:
  std::vector<Point> points_;
  std::vector<Label> labels_;
  std::uint64_t hash_ = 0;
};

/// Prediction rule: nearest neighbor (m = 1) or m nearest neighbors.
struct PredictionRule {
  std::uint32_t m = 1;
  static PredictionRule nn() { return {1}; }
  static PredictionRule mnn(std::uint32_t m) { return {m}; }
};

/// Fraction of probes the rule misclassifies against the probes' own labels.
/// Tie-breaking uses a stream derived from (tie_seed, probe index), so the
/// estimate is reproducible and independent of evaluation order. Probes are
/// evaluated concurrently. Throws on an empty probe set or |z| < m.
double estimate_error(SampleView z, const ProbeSet& probes, PredictionRule rule,
                      std::uint64_t tie_seed);

/// Fraction of probes where the (non-modal count) heuristic is positive,
/// i.e. the measure of the heuristic-active region. Throws for the distance
/// heuristic, whose positive region is not the quantity of interest here.
double estimate_q_measure(SampleView z, const HeuristicSpec& h,
                          const ProbeSet& probes);

/// Grid of predicted labels over the unit square (row 0 = top).
struct PredictionRaster {
  int width = 0;
  int height = 0;
  std::vector<Label> labels;  // row-major

  Label at(int row, int col) const {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
};

/// Prediction at every pixel center; pixel (row, col) covers
/// [col/W, (col+1)/W) x (1-(row+1)/H, 1-row/H]. Ties are broken by a stream
/// derived from (raster_seed, pixel index).
PredictionRaster raster_predict(SampleView z, int width, int height,
                                PredictionRule rule, std::uint64_t raster_seed);

struct CurveRow {
  std::uint32_t n = 0;
  double error = 0.0;
  std::optional<double> q_measure;
};

struct ErrorCurve {
  std::vector<CurveRow> rows;
};

/// Error (and, for nmc heuristics, q-measure) along the run at
/// n = seed_count, seed_count + stride, ...; the final n is always included.
/// The same probe set is used for every row.
ErrorCurve error_curve(const RunTrace& trace,
                       const std::optional<HeuristicSpec>& q_heuristic,
                       const ProbeSet& probes, std::uint32_t stride,
                       std::uint64_t tie_seed);

/// One step of the 1D monotone-failure construction.
struct FailureDemoRow {
  int n = 0;
  double analytic_error = 0.0;  // exact value, also given as a dyadic pair
  std::int64_t analytic_num = 0;
  int analytic_scale = 0;  // analytic_error = analytic_num * 2^-analytic_scale
  double mc_error = 0.0;
};

struct FailureDemoResult {
  std::vector<FailureDemoRow> rows;  // n = 1 .. n_steps
  bool strictly_increasing = false;  // over n = 2 .. n_steps, exact
  bool increments_ok = false;        // step n gain >= 2^-(n+1), exact
};

/// Deterministic 1D sample sequence z_1 = 0, z_n = 2^(2-n) against the
/// truncated indicator truth (eps_i = 2^-(i+2)). The analytic error of the
/// nearest-neighbor prediction is computed exactly over the dyadic
/// breakpoints (no tolerance); the Monte Carlo column reuses one probe set
/// of mc_probes points across all steps. Requires 2 <= n_steps <= i_max - 2.
FailureDemoResult failure_demo(int i_max, int n_steps, std::size_t mc_probes,
                               std::uint64_t seed);

}  // namespace selsample
