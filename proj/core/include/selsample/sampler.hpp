#pragma once

#include <cstdint>
#include <vector>

#include "selsample/domain.hpp"
#include "selsample/heuristics.hpp"
#include "selsample/sample_set.hpp"

namespace selsample {

/// Candidate-count schedule kappa(n).
struct KappaSchedule {
  enum class Kind { Constant, HarmonicLog, Iid };

  Kind kind = Kind::Iid;
  std::uint32_t k = 1;  // Constant only

  static KappaSchedule constant(std::uint32_t k);
  static KappaSchedule harmonic_log() { return {Kind::HarmonicLog, 0}; }
  static KappaSchedule iid() { return {Kind::Iid, 1}; }

  std::string selector() const;
  bool operator==(const KappaSchedule&) const = default;
};

/// kappa(n) for step n >= 1. The harmonic-log schedule evaluates to
/// max(1, floor(H_j)) with j = ceil(lg(n+1)) and H_j the j-th harmonic
/// number; it is nondecreasing and stays below 4 for every n <= 10^9.
std::uint32_t kappa_value(const KappaSchedule& schedule, std::uint64_t n);

/// Initial iid seeding size ceil(max(20, 5/p)) for a smallest-component
/// measure p in (0, 1]. Throws outside that range.
std::uint32_t seed_count_from_p(double p);

struct ProcessConfig {
  HeuristicSpec heuristic;
  KappaSchedule kappa = KappaSchedule::iid();
  std::uint32_t total_samples = 0;
  std::uint32_t initial_seed_count = 0;
  std::uint64_t seed = 1;
};

/// Per-step record of the selection loop.
struct StepRecord {
  std::uint32_t n = 0;      // 1-based index of the accepted sample
  std::uint32_t kappa = 0;  // candidates drawn this step
  double phi = 0.0;         // winning score
  std::uint32_t ties = 0;   // candidates achieving the winning score
};

struct RunTrace {
  SampleSet samples;
  std::uint32_t initial_seed_count = 0;
  std::vector<StepRecord> steps;  // one per selected (non-seed) sample
};

/// One selection step: draws kappa(n) candidates from the domain measure,
/// scores each against z, and returns a uniform choice among the argmax,
/// labeled by the true function. Consumes exactly
/// kappa(n) * dimension + 1 raw rng draws. geom is required for the
/// nmc-vor heuristic and must cover exactly z.
LabeledSample select_next(SampleView z, const ProcessConfig& cfg,
                          std::uint64_t n, const DomainSpace& domain,
                          const TrueFunction& truth, const VoronoiIndex* geom,
                          RngState& rng, StepRecord* record = nullptr);

/// Runs the full process: initial_seed_count iid samples, then selection
/// steps until total_samples exist. Deterministic given cfg.seed.
RunTrace run_process(const ProcessConfig& cfg, const DomainSpace& domain,
                     const TrueFunction& truth);

}  // namespace selsample
