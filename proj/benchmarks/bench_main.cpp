#include <benchmark/benchmark.h>

#include <random>

#include "drc/optimizer.hpp"
#include "drc/simulator.hpp"
#include "drc/tsp.hpp"

namespace {

void BM_ExactTour(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<drc::Point> pts(state.range(0));
  for (auto& p : pts) p = {u(rng), u(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(drc::exact_tour_length(pts, drc::TourMode::closed_cycle));
}
BENCHMARK(BM_ExactTour)->DenseRange(6, 16, 2)->Unit(benchmark::kMicrosecond);

void BM_TotalCost(benchmark::State& state) {
  const auto p = drc::table2_preset();
  drc::DesignSolution d;
  d.grid = drc::make_grid(p, 2, 2);
  d.K = 8;
  for (int i = 0; i < 4; ++i) d.zones.push_back({drc::zone_at(d.grid, i), 0.083, p.H_t, 1});
  const auto model = drc::KStarModel::table1();
  for (auto _ : state) benchmark::DoNotOptimize(drc::total_generalized_cost(p, d, model).GC);
}
BENCHMARK(BM_TotalCost);

void BM_SearchDesign(benchmark::State& state) {
  const auto p = drc::table2_preset();
  drc::SearchSpace sp;
  sp.strategy = state.range(0) ? drc::Strategy::semi_flexible : drc::Strategy::fully_flexible;
  const auto model = drc::KStarModel::table1();
  for (auto _ : state) benchmark::DoNotOptimize(drc::search_design(p, sp, model).cost.GC);
}
BENCHMARK(BM_SearchDesign)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SimulateHour(benchmark::State& state) {
  const auto p = drc::table2_preset();
  drc::SearchSpace sp;
  const auto model = drc::KStarModel::table1();
  const auto d = drc::search_design(p, sp, model).best;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto demand = drc::generate_demand(p, ++seed);
    benchmark::DoNotOptimize(drc::simulate_ff_hour(p, d, model, demand, seed).GC);
  }
}
BENCHMARK(BM_SimulateHour)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
