#include <stdexcept>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "selsample/csv.hpp"
#include "selsample/evaluation.hpp"

using namespace selsample;
using namespace selsample::testing;

TEST_CASE("probe sets are deterministic with a stable checksum") {
  const DomainSpace sq = DomainSpace::unit_square();
  const TrueFunction truth = TrueFunction::disk(0.5, 0.5, 0.3);
  const ProbeSet a = ProbeSet::draw(sq, truth, 1000, 5);
  const ProbeSet b = ProbeSet::draw(sq, truth, 1000, 5);
  CHECK(a.content_hash() == b.content_hash());
  CHECK(a.size() == 1000);
  const ProbeSet c = ProbeSet::draw(sq, truth, 1000, 6);
  CHECK(a.content_hash() != c.content_hash());
}

TEST_CASE("estimate_error basics") {
  const DomainSpace sq = DomainSpace::unit_square();

  // Constant truth: everything is predicted correctly.
  const TrueFunction constant = TrueFunction::checkerboard(1);
  const ProbeSet flat = ProbeSet::draw(sq, constant, 2000, 3);
  SampleSet z;
  z.append(Point::d2(0.5, 0.5), constant.label(Point::d2(0.5, 0.5)));
  CHECK(estimate_error(z.view(), flat, PredictionRule::nn(), 1) == 0.0);

  // One sample labeled "outside" misclassifies exactly the disk mass.
  const TrueFunction disk = TrueFunction::disk(0.5, 0.5, 0.3);
  const ProbeSet probes = ProbeSet::draw(sq, disk, 20000, 4);
  SampleSet outside;
  outside.append(Point::d2(0.95, 0.95), 0);
  const double p = M_PI * 0.09;
  const double sigma = std::sqrt(p * (1 - p) / 20000);
  CHECK(std::abs(estimate_error(outside.view(), probes, PredictionRule::nn(), 1) - p) <
        3 * sigma);

  // Probes as samples: interpolation gives zero error.
  SampleSet self;
  for (std::size_t i = 0; i < 500; ++i) {
    self.append(probes.point(i), probes.label(i));
  }
  ProbeSet head = ProbeSet::draw(sq, disk, 500, 4);
  CHECK(estimate_error(self.view(), head, PredictionRule::nn(), 9) == 0.0);

  SampleSet empty;
  CHECK_THROWS_AS(estimate_error(empty.view(), probes, PredictionRule::nn(), 1),
                  std::invalid_argument);
}

TEST_CASE("disjoint probe sets agree within Monte Carlo noise") {
  const DomainSpace sq = DomainSpace::unit_square();
  const TrueFunction disk = TrueFunction::disk(0.5, 0.5, 0.3);
  RngState gen(3);
  SampleSet z;
  for (int i = 0; i < 50; ++i) {
    const Point p = sq.sample(gen);
    z.append(p, disk.label(p));
  }
  const std::size_t m = 5000;
  for (int trial = 0; trial < 20; ++trial) {
    const ProbeSet p1 = ProbeSet::draw(sq, disk, m, 100 + 2 * trial);
    const ProbeSet p2 = ProbeSet::draw(sq, disk, m, 101 + 2 * trial);
    const double e1 = estimate_error(z.view(), p1, PredictionRule::nn(), 7);
    const double e2 = estimate_error(z.view(), p2, PredictionRule::nn(), 7);
    const double pooled = 0.5 * (e1 + e2);
    const double sigma = std::sqrt(std::max(pooled * (1 - pooled), 1e-9) * 2 / m);
    CHECK(std::abs(e1 - e2) <= 6 * sigma);
  }
}

TEST_CASE("estimate_q_measure") {
  const DomainSpace sq = DomainSpace::unit_square();
  const TrueFunction disk = TrueFunction::disk(0.5, 0.5, 0.3);
  const ProbeSet probes = ProbeSet::draw(sq, disk, 2000, 11);

  // All labels equal: the non-modal count vanishes everywhere.
  RngState gen(9);
  SampleSet mono;
  for (int i = 0; i < 30; ++i) mono.append(sq.sample(gen), 1);
  CHECK(estimate_q_measure(mono.view(), HeuristicSpec::nmc_knn(6), probes) == 0.0);
  CHECK(estimate_q_measure(mono.view(), HeuristicSpec::nmc_voronoi(), probes) == 0.0);

  // Two samples with different labels and K = 2: every probe sees both.
  SampleSet two;
  two.append(Point::d2(0.2, 0.2), 0);
  two.append(Point::d2(0.8, 0.8), 1);
  CHECK(estimate_q_measure(two.view(), HeuristicSpec::nmc_knn(2), probes) == 1.0);

  CHECK_THROWS_AS(estimate_q_measure(two.view(), HeuristicSpec::distance(), probes),
                  std::invalid_argument);
}

TEST_CASE("raster prediction") {
  // Single sample: a uniform raster.
  SampleSet one;
  one.append(Point::d2(0.3, 0.7), 5);
  const PredictionRaster uni = raster_predict(one.view(), 16, 16, PredictionRule::nn(), 1);
  for (Label l : uni.labels) CHECK(l == 5);

  // Two samples split along the perpendicular bisector.
  SampleSet two;
  two.append(Point::d2(0.25, 0.5), 0);
  two.append(Point::d2(0.75, 0.5), 1);
  const PredictionRaster split = raster_predict(two.view(), 64, 64, PredictionRule::nn(), 1);
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) {
      CHECK(split.at(r, c) == (c < 32 ? 0 : 1));
    }
  }
  CHECK_THROWS_AS(raster_predict(two.view(), 0, 16, PredictionRule::nn(), 1),
                  std::invalid_argument);
}

TEST_CASE("raster pixels equal pointwise predictions with shared tie seeds") {
  RngState gen(15);
  const DomainSpace sq = DomainSpace::unit_square();
  const TrueFunction truth = TrueFunction::checkerboard(3);
  SampleSet z;
  for (int i = 0; i < 60; ++i) {
    const Point p = sq.sample(gen);
    z.append(p, truth.label(p));
  }
  const std::uint64_t raster_seed = 33;
  const int w = 32, h = 32;
  const PredictionRaster raster =
      raster_predict(z.view(), w, h, PredictionRule::nn(), raster_seed);
  for (int t = 0; t < 1000; ++t) {
    const int row = static_cast<int>(gen.uniform_index(h));
    const int col = static_cast<int>(gen.uniform_index(w));
    const std::size_t idx = std::size_t(row) * w + col;
    RngState r = RngState::substream(raster_seed, idx);
    const Point center = Point::d2((col + 0.5) / w, 1.0 - (row + 0.5) / h);
    CHECK(raster.at(row, col) == predict_nn(center, z.view(), r));
  }
}

TEST_CASE("error_curve rows and q columns") {
  const DomainSpace sq = DomainSpace::unit_square();
  const TrueFunction truth = TrueFunction::disk(0.5, 0.5, 0.3);
  ProcessConfig cfg;
  cfg.heuristic = HeuristicSpec::nmc_knn(6);
  cfg.kappa = KappaSchedule::constant(5);
  cfg.total_samples = 80;
  cfg.initial_seed_count = 20;
  cfg.seed = 3;
  const RunTrace trace = run_process(cfg, sq, truth);
  const ProbeSet probes = ProbeSet::draw(sq, truth, 1000, cfg.seed);

  const ErrorCurve two_rows =
      error_curve(trace, cfg.heuristic, probes, 60, 7);
  REQUIRE(two_rows.rows.size() == 2);
  CHECK(two_rows.rows[0].n == 20);
  CHECK(two_rows.rows[1].n == 80);
  CHECK(two_rows.rows[0].q_measure.has_value());

  const ErrorCurve no_q = error_curve(trace, std::nullopt, probes, 25, 7);
  CHECK(no_q.rows.back().n == 80);  // final n is always included
  for (const CurveRow& row : no_q.rows) CHECK(!row.q_measure.has_value());

  // Constant truth: zero error everywhere.
  const TrueFunction constant = TrueFunction::checkerboard(1);
  ProcessConfig ccfg = cfg;
  ccfg.heuristic = HeuristicSpec::distance();
  const RunTrace ctrace = run_process(ccfg, sq, constant);
  const ProbeSet cprobes = ProbeSet::draw(sq, constant, 500, 1);
  for (const CurveRow& row : error_curve(ctrace, std::nullopt, cprobes, 20, 1).rows) {
    CHECK(row.error == 0.0);
  }

  CHECK_THROWS_AS(error_curve(trace, std::nullopt, probes, 0, 7),
                  std::invalid_argument);
}

TEST_CASE("curve csv round-trips losslessly") {
  ErrorCurve curve;
  curve.rows.push_back({20, 0.1234567890123, std::optional<double>(0.5)});
  curve.rows.push_back({40, 1.0 / 3.0, std::nullopt});
  std::ostringstream out;
  write_curve_csv(out, curve);
  std::istringstream in(out.str());
  const ErrorCurve back = read_curve_csv(in);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].n == 20);
  CHECK(back.rows[0].error == curve.rows[0].error);
  CHECK(back.rows[0].q_measure == curve.rows[0].q_measure);
  CHECK(back.rows[1].error == curve.rows[1].error);
  CHECK(!back.rows[1].q_measure.has_value());
}

TEST_CASE("failure demo: exact errors match the closed form") {
  const int i_max = 20;
  const FailureDemoResult result = failure_demo(i_max, 10, 100000, 1);
  REQUIRE(result.rows.size() == 10);
  CHECK(result.strictly_increasing);
  CHECK(result.increments_ok);

  // Closed form, derived by summing the interval masses directly:
  // err(1) = 1/4 + 3*2^-(i_max+2); err(n) = 3/4 + 3*2^-(i_max+2) - 2^-n.
  const int scale = result.rows[0].analytic_scale;
  for (const FailureDemoRow& row : result.rows) {
    const std::int64_t expect =
        row.n == 1 ? (std::int64_t(1) << (scale - 2)) + 3 * (std::int64_t(1) << (scale - i_max - 2))
                   : 3 * (std::int64_t(1) << (scale - 2)) +
                         3 * (std::int64_t(1) << (scale - i_max - 2)) -
                         (std::int64_t(1) << (scale - row.n));
    CHECK(row.analytic_num == expect);
    CHECK(row.analytic_error ==
          std::ldexp(double(row.analytic_num), -scale));
    // Monte Carlo column within 3 sigma of the exact value.
    const double sigma =
        std::sqrt(row.analytic_error * (1 - row.analytic_error) / 100000);
    CHECK(std::abs(row.mc_error - row.analytic_error) < 3 * sigma);
  }

  const FailureDemoResult tiny = failure_demo(20, 2, 1000, 1);
  CHECK(tiny.rows.size() == 2);
  CHECK(tiny.strictly_increasing);

  CHECK_THROWS_AS(failure_demo(20, 19, 1000, 1), std::invalid_argument);
  CHECK_THROWS_AS(failure_demo(20, 1, 1000, 1), std::invalid_argument);
}
