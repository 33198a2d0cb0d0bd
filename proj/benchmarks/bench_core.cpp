#include <benchmark/benchmark.h>

#include "selsample/evaluation.hpp"
#include "selsample/heuristics.hpp"
#include "selsample/predictor.hpp"
#include "selsample/sampler.hpp"
#include "selsample/voronoi.hpp"

using namespace selsample;

namespace {

SampleSet random_samples(std::size_t n, std::uint64_t seed) {
  SampleSet z;
  RngState rng(seed);
  const DomainSpace sq = DomainSpace::unit_square();
  const TrueFunction truth = TrueFunction::disk(0.5, 0.5, 0.3);
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = sq.sample(rng);
    z.append(p, truth.label(p));
  }
  return z;
}

void BM_NearestScan(benchmark::State& state) {
  const SampleSet z = random_samples(state.range(0), 1);
  RngState rng(2);
  const DomainSpace sq = DomainSpace::unit_square();
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_indices(sq.sample(rng), z.view()));
  }
}
BENCHMARK(BM_NearestScan)->Arg(100)->Arg(1000)->Arg(10000);

void BM_PhiNmcKnn(benchmark::State& state) {
  const SampleSet z = random_samples(state.range(0), 3);
  RngState rng(4);
  const DomainSpace sq = DomainSpace::unit_square();
  for (auto _ : state) {
    benchmark::DoNotOptimize(phi_nmc_knn(sq.sample(rng), z.view(), 6));
  }
}
BENCHMARK(BM_PhiNmcKnn)->Arg(100)->Arg(1000)->Arg(10000);

void BM_VoronoiBuild(benchmark::State& state) {
  const SampleSet z = random_samples(state.range(0), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(VoronoiIndex::build(z.view()));
  }
}
BENCHMARK(BM_VoronoiBuild)->Arg(100)->Arg(1000);

void BM_VoronoiNeighborQuery(benchmark::State& state) {
  const SampleSet z = random_samples(state.range(0), 6);
  const VoronoiIndex geom = VoronoiIndex::build(z.view());
  RngState rng(7);
  const DomainSpace sq = DomainSpace::unit_square();
  for (auto _ : state) {
    benchmark::DoNotOptimize(geom.neighbors(sq.sample(rng)));
  }
}
BENCHMARK(BM_VoronoiNeighborQuery)->Arg(100)->Arg(1000);

void BM_ProcessStep(benchmark::State& state) {
  const DomainSpace sq = DomainSpace::unit_square();
  const TrueFunction truth = TrueFunction::disk(0.5, 0.5, 0.3);
  const SampleSet z = random_samples(state.range(0), 8);
  ProcessConfig cfg;
  cfg.heuristic = HeuristicSpec::nmc_knn(6);
  cfg.kappa = KappaSchedule::constant(10);
  RngState rng(9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        select_next(z.view(), cfg, z.size() + 1, sq, truth, nullptr, rng));
  }
}
BENCHMARK(BM_ProcessStep)->Arg(200)->Arg(2000);

void BM_EstimateError(benchmark::State& state) {
  const DomainSpace sq = DomainSpace::unit_square();
  const TrueFunction truth = TrueFunction::disk(0.5, 0.5, 0.3);
  const SampleSet z = random_samples(1000, 10);
  const ProbeSet probes = ProbeSet::draw(sq, truth, state.range(0), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_error(z.view(), probes, PredictionRule::nn(), 12));
  }
}
BENCHMARK(BM_EstimateError)->Arg(1000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
