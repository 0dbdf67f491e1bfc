// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "kdlca/amortization.hpp"
#include "kdlca/bootstrap.hpp"
#include "kdlca/frontier.hpp"
#include "kdlca/kd/beam_search.hpp"
#include "kdlca/kd/fixtures.hpp"

using namespace kdlca;

static void BM_PairedBootstrap(benchmark::State& state) {
  const auto systems = static_cast<std::size_t>(state.range(0));
  const auto docs = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.8, 0.1);
  ScoreMatrix scores(systems, std::vector<double>(docs));
  for (auto& row : scores) {
    for (auto& v : row) v = n(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(paired_bootstrap_ci(scores, kDefaultResamples, kDefaultConfidenceLevel, 7));
  }
}
BENCHMARK(BM_PairedBootstrap)->Args({2, 500})->Args({8, 2000})->Unit(benchmark::kMillisecond);

static void BM_ParetoFrontier(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<FrontierPoint> points(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].system_name = "p" + std::to_string(i);
    points[i].group = points[i].system_name;
    points[i].production_footprint_kgco2e = u(rng);
    points[i].mean_quality = u(rng);
    points[i].quality_ci = {points[i].mean_quality, points[i].mean_quality};
  }
  for (auto _ : state) benchmark::DoNotOptimize(pareto_frontier(points));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ParetoFrontier)->RangeMultiplier(8)->Range(64, 32768)->Complexity(benchmark::oNLogN);

static void BM_BeamSearch(benchmark::State& state) {
  const auto fixture = kd::make_fixture("hash_v8");
  const std::vector<TokenId> source{1, 2, 3, 4, 5, 6, 7, 1, 2, 3};
  const kd::BeamConfig config{static_cast<std::size_t>(state.range(0)), 24, 0.0};
  for (auto _ : state) {
    kd::ComputeTrace trace;
    benchmark::DoNotOptimize(kd::beam_search(*fixture.teacher, source, config, trace));
  }
}
BENCHMARK(BM_BeamSearch)->Arg(1)->Arg(5)->Arg(12);

static void BM_LooRobustFit(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0, 1e-3);
  std::vector<CostPoint> points;
  for (int i = 0; i < state.range(0); ++i) {
    const double x = 1e4 * (1 + i % 9);
    points.push_back({x, 0.5 + 2e-6 * x + noise(rng)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(loo_robust_fit(points));
}
BENCHMARK(BM_LooRobustFit)->Arg(9)->Arg(27)->Arg(243);

BENCHMARK_MAIN();
