#include "selsample/sampler.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace selsample {

KappaSchedule KappaSchedule::constant(std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("kappa constant: k must be >= 1");
  return {Kind::Constant, k};
}

std::string KappaSchedule::selector() const {
  switch (kind) {
    case Kind::Constant:
      return "const:" + std::to_string(k);
    case Kind::HarmonicLog:
      return "hlog";
    case Kind::Iid:
      return "iid";
  }
  return "?";
}

std::uint32_t kappa_value(const KappaSchedule& schedule, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("kappa_value: n must be >= 1");
  switch (schedule.kind) {
    case KappaSchedule::Kind::Constant:
      return schedule.k;
    case KappaSchedule::Kind::Iid:
      return 1;
    case KappaSchedule::Kind::HarmonicLog: {
      // j = ceil(lg(n+1)) computed in integers; n >= 1 so n+1 >= 2.
      const unsigned j = std::bit_width(n);  // bit_width(v-1) with v = n+1
      double h = 0.0;
      for (unsigned i = 1; i <= j; ++i) h += 1.0 / i;
      const auto floored = static_cast<std::uint32_t>(h);
      return floored < 1 ? 1 : floored;
    }
  }
  return 1;
}

std::uint32_t seed_count_from_p(double p) {
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("seed_count_from_p: p must be in (0, 1]");
  }
  const double raw = std::max(20.0, 5.0 / p);
  return static_cast<std::uint32_t>(std::ceil(raw));
}

LabeledSample select_next(SampleView z, const ProcessConfig& cfg,
                          std::uint64_t n, const DomainSpace& domain,
                          const TrueFunction& truth, const VoronoiIndex* geom,
                          RngState& rng, StepRecord* record) {
  const std::uint32_t k = kappa_value(cfg.kappa, n);
  std::vector<Point> candidates;
  candidates.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) candidates.push_back(domain.sample(rng));

  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> argmax;
  for (std::uint32_t i = 0; i < k; ++i) {
    const double phi = phi_value(cfg.heuristic, candidates[i], z, geom);
    if (phi > best) {
      best = phi;
      argmax.clear();
    }
    if (phi == best) argmax.push_back(i);
  }
  const Point chosen = candidates[argmax[rng.uniform_index(argmax.size())]];
  if (record != nullptr) {
    record->n = static_cast<std::uint32_t>(n);
    record->kappa = k;
    record->phi = best;
    record->ties = static_cast<std::uint32_t>(argmax.size());
  }
  return LabeledSample{chosen, truth.label(chosen), 0};
}

RunTrace run_process(const ProcessConfig& cfg, const DomainSpace& domain,
                     const TrueFunction& truth) {
  if (cfg.total_samples < cfg.initial_seed_count) {
    throw std::invalid_argument("run_process: total_samples < initial_seed_count");
  }
  if (truth.domain_dimension() != domain.dimension()) {
    throw std::invalid_argument("run_process: truth/domain dimension mismatch");
  }
  if (cfg.heuristic.kind == HeuristicSpec::Kind::NmcVoronoi &&
      domain.dimension() != 2) {
    throw std::invalid_argument("run_process: nmc-vor requires a 2D domain");
  }
  if (cfg.heuristic.kind == HeuristicSpec::Kind::NmcKnn && cfg.heuristic.k < 2) {
    throw std::invalid_argument("run_process: nmc-knn requires k >= 2");
  }

  RngState rng = RngState::substream(cfg.seed, stream_id::kProcess);
  RunTrace trace;
  trace.initial_seed_count = cfg.initial_seed_count;

  const bool track_geom =
      cfg.heuristic.kind == HeuristicSpec::Kind::NmcVoronoi;
  VoronoiIndex geom;

  for (std::uint32_t i = 0; i < cfg.initial_seed_count; ++i) {
    const Point p = domain.sample(rng);
    trace.samples.append(p, truth.label(p));
    if (track_geom) geom.append(trace.samples.back());
  }
  while (trace.samples.size() < cfg.total_samples) {
    const std::uint64_t n = trace.samples.size() + 1;
    StepRecord record;
    const LabeledSample s =
        select_next(trace.samples.view(), cfg, n, domain, truth,
                    track_geom ? &geom : nullptr, rng, &record);
    trace.samples.append(s.point, s.label);
    if (track_geom) geom.append(trace.samples.back());
    trace.steps.push_back(record);
  }
  return trace;
}

}  // namespace selsample
