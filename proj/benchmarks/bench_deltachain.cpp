// Timings for the main kernels and one full pipeline run.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "deltachain/chain_graph.hpp"
#include "deltachain/io.hpp"
#include "deltachain/measures.hpp"
#include "deltachain/pipeline.hpp"
#include "deltachain/transport.hpp"

using namespace deltachain;

namespace {

SystemPtr doubling(std::size_t n) {
  return std::make_shared<const FiniteMetricSystem>(circle_doubling(n));
}

PeriodicOrbitMeasure random_orbit(std::size_t len, std::size_t alphabet, std::mt19937_64& rng) {
  Word w(len);
  for (auto& c : w) c = static_cast<PointId>(rng() % alphabet);
  return PeriodicOrbitMeasure(w);
}

void BM_MixingCertificate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ChainGraph g(doubling(n), 4.0 / static_cast<double>(n));
  for (auto _ : state) benchmark::DoNotOptimize(mixing_certificate(g));
}
BENCHMARK(BM_MixingCertificate)->Arg(16)->Arg(64)->Arg(256);

void BM_Transport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RealMatrix cost = random_metric_system(n, 1).distances();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> a(n), b(n);
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += a[i] = u(rng);
    sb += b[i] = u(rng);
  }
  for (std::size_t i = 0; i < n; ++i) {
    a[i] /= sa;
    b[i] /= sb;
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_transport(a, b, cost));
}
BENCHMARK(BM_Transport)->Arg(8)->Arg(32)->Arg(128);

void BM_RhoBarPeriodic(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const RealMatrix cost = circle_grid_metric(15);
  std::mt19937_64 rng(3);
  const PeriodicOrbitMeasure p = random_orbit(len, 15, rng);
  const PeriodicOrbitMeasure q = random_orbit(len + 1, 15, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rho_bar_periodic(p, q, cost));
}
BENCHMARK(BM_RhoBarPeriodic)->Arg(4)->Arg(16)->Arg(64);

void BM_RhoBarMarkovUpper(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const RealMatrix cost = circle_grid_metric(15);
  std::mt19937_64 rng(4);
  const MarkovMeasure p = MarkovMeasure::from_periodic(random_orbit(len, 15, rng));
  const MarkovMeasure q = MarkovMeasure::from_periodic(random_orbit(len + 1, 15, rng));
  for (auto _ : state) benchmark::DoNotOptimize(rho_bar_markov_upper(p, q, cost));
}
BENCHMARK(BM_RhoBarMarkovUpper)->Arg(2)->Arg(4)->Arg(6);

void BM_CycleEnumeration(benchmark::State& state) {
  const ChainGraph g(doubling(15), 0.2);
  const auto cap = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ergodic_measures_of_graph(g, cap, 100000));
}
BENCHMARK(BM_CycleEnumeration)->Arg(3)->Arg(5)->Arg(7);

void BM_Pipeline(benchmark::State& state) {
  PipelineConfig cfg;
  cfg.system_inline = system_to_json(circle_doubling(15));
  cfg.n_max = 6;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(cfg));
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
