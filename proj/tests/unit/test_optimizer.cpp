#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "drc/error.hpp"
#include "drc/optimizer.hpp"
#include "oracles.hpp"

using namespace drc;

namespace {

const KStarModel kTable = KStarModel::table1();

SearchSpace space_for(Strategy s) {
  SearchSpace sp;
  sp.strategy = s;
  return sp;
}

double mean_H_p(const DesignSolution& d) {
  double sum = 0;
  for (const auto& z : d.zones) sum += z.H_p;
  return sum / d.zones.size();
}

// Per-zone dense-grid minimum of the full zone cost over H_p and gamma.
double dense_combo_gc(const ScenarioParams& p, int M, int N, int K, int points) {
  const auto g = make_grid(p, M, N);
  const double x_max = std::pow(std::sqrt(K + 1.0) - 1.0, 2);
  double total = 0;
  for (int i = 0; i < g.zone_count(); ++i) {
    const auto z = zone_at(g, i);
    const double hi = std::min(p.H_max, x_max / (p.lambda_p * g.zone_area()));
    if (hi < p.H_min) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (int gamma = 1; gamma <= 5; ++gamma) {
      const double H_d = gamma * p.H_t;
      if (H_d > p.H_max || !capacity_ok(p.lambda_d * H_d * g.zone_area(), K)) continue;
      for (int k = 0; k <= points; ++k) {
        const double H = p.H_min + (hi - p.H_min) * k / points;
        const ZoneDesign zd{z, H, H_d, gamma};
        best = std::min(best, zone_cost_terms(p, g, zd, Strategy::fully_flexible, kTable, K, 0).sum());
      }
    }
    total += best;
  }
  return total;
}

}  // namespace

TEST(HeadwayCap, ClosedForm) {
  EXPECT_NEAR(headway_cap_from_capacity(40, 1, 1, 8), 0.1, 1e-12);
  const double H = headway_cap_from_capacity(40, 1, 1, 3);
  EXPECT_NEAR(40 * H, 1.0, 1e-12);
  EXPECT_TRUE(capacity_ok(40 * H, 3));
}

TEST(ZoneHeadway, SingletonInterval) {
  auto p = table2_preset();
  p.H_max = p.H_min;
  p.H_t = p.H_min;
  const auto g = make_grid(p, 2, 2);
  const auto c = optimize_zone_headway(p, g, {1, 1}, 8, Strategy::fully_flexible, kTable, 0);
  ASSERT_TRUE(c);
  EXPECT_DOUBLE_EQ(c->H, p.H_min);
}

TEST(ZoneHeadway, EmptyIntervalIsInfeasible) {
  const auto p = table2_preset();
  const auto g = make_grid(p, 1, 1);  // 160 patrons/h in one zone
  EXPECT_FALSE(optimize_zone_headway(p, g, {1, 1}, 1, Strategy::fully_flexible, kTable, 0));
}

TEST(ZoneHeadway, NoWorseThanDenseGrid) {
  const auto p = table2_preset();
  for (const auto s : {Strategy::fully_flexible, Strategy::semi_flexible}) {
    const auto g = make_grid(p, 2, 2);
    const double w0 = s == Strategy::semi_flexible ? 0.5 : 0.0;
    for (const int K : {6, 8, 14}) {
      for (int i = 0; i < 4; ++i) {
        const auto z = zone_at(g, i);
        const auto c = optimize_zone_headway(p, g, z, K, s, kTable, w0);
        ASSERT_TRUE(c);
        const double hi = std::min(p.H_max, headway_cap_from_capacity(p.lambda_p, g.l, g.w, K));
        const auto [h, v] = oracle::dense_grid_min(
            [&](double H) { return direction_cost_zone(p, g, z, H, 1, Direction::outbound, s, kTable, K, w0); },
            p.H_min, hi, 199);
        EXPECT_LE(c->cost, v + 1e-12) << "K=" << K << " zone " << i;
      }
    }
  }
}

TEST(ZoneHeadway, ReferenceZonesAverage) {
  const auto p = table2_preset();
  const auto g = make_grid(p, 2, 2);
  double sum = 0;
  for (int i = 0; i < 4; ++i) {
    const auto c = optimize_zone_headway(p, g, zone_at(g, i), 8, Strategy::fully_flexible, kTable, 0);
    ASSERT_TRUE(c);
    sum += c->H;
  }
  EXPECT_NEAR(sum / 4 * 60, 4.98, 0.05 * 4.98);
}

TEST(ZoneGamma, SynchronizedAtReferenceDesign) {
  const auto p = table2_preset();
  const auto g = make_grid(p, 2, 2);
  for (int i = 0; i < 4; ++i) {
    const auto c = optimize_zone_gamma(p, g, zone_at(g, i), 8, Strategy::fully_flexible, kTable, 0);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->gamma, 1);
    EXPECT_NEAR(c->H_d * 60, 5.0, 1e-9);
  }
}

TEST(ZoneGamma, SingleSeatBusInfeasible) {
  const auto p = table2_preset();
  const auto g = make_grid(p, 2, 2);
  EXPECT_FALSE(optimize_zone_gamma(p, g, {1, 1}, 1, Strategy::fully_flexible, kTable, 0));
}

TEST(ZoneGamma, TiesGoToSmallerGamma) {
  // Equal-cost candidates: the same gamma listed twice behind a worse one.
  const auto p = table2_preset();
  const auto g = make_grid(p, 2, 2);
  const auto c = optimize_zone_gamma(p, g, {1, 1}, 8, Strategy::fully_flexible, kTable, 0, {2, 1, 1});
  ASSERT_TRUE(c);
  EXPECT_EQ(c->gamma, 1);
}

TEST(SearchDesign, FullyFlexibleReferenceDesign) {
  const auto p = table2_preset();
  const auto r = search_design(p, space_for(Strategy::fully_flexible), kTable);
  EXPECT_EQ(r.best.grid.M, 2);
  EXPECT_EQ(r.best.grid.N, 2);
  EXPECT_EQ(r.best.K, 8);
  EXPECT_NEAR(mean_H_p(r.best) * 60, 4.98, 0.05 * 4.98);
  for (const auto& e : r.log) {
    if (e.feasible) EXPECT_GE(e.GC, r.cost.GC - 1e-9);
  }
}

TEST(SearchDesign, SemiFlexibleReferenceDesign) {
  const auto p = table2_preset();
  const auto r = search_design(p, space_for(Strategy::semi_flexible), kTable);
  EXPECT_EQ(r.best.grid.M * r.best.grid.N, 4);
  EXPECT_EQ(std::min(r.best.grid.M, r.best.grid.N), 1);
  EXPECT_EQ(r.best.K, 9);
  EXPECT_DOUBLE_EQ(r.best.w0(), 0.5);
}

TEST(SearchDesign, MatchesDenseBruteForceOnTinyRegion) {
  auto p = table2_preset();
  p.L = p.W = 1;
  p.lambda_p = p.lambda_d = 2;
  auto sp = space_for(Strategy::fully_flexible);
  sp.M_values = sp.N_values = {1, 2, 3};
  sp.K_values = {1, 2, 3, 4, 5, 6};
  const auto r = search_design(p, sp, kTable);
  double brute = std::numeric_limits<double>::infinity();
  for (const int M : sp.M_values)
    for (const int N : sp.N_values)
      for (const int K : sp.K_values) brute = std::min(brute, dense_combo_gc(p, M, N, K, 400));
  EXPECT_LE(std::abs(r.cost.GC - brute) / brute, 0.001);
  EXPECT_LE(r.cost.GC, brute + 1e-9);
}

TEST(SearchDesign, RelaxingCapacityNeverHurts) {
  const auto p = table2_preset();
  auto narrow = space_for(Strategy::fully_flexible);
  narrow.K_values = {4, 5, 6};
  auto wide = narrow;
  wide.K_values = {4, 5, 6, 7, 8, 9, 10};
  EXPECT_LE(search_design(p, wide, kTable).cost.GC, search_design(p, narrow, kTable).cost.GC + 1e-9);
}

TEST(SearchDesign, FullyFlexibleAspectRatioBetweenOneAndTwo) {
  for (const double lambda : {10.0, 40.0, 100.0}) {
    auto p = table2_preset();
    p.lambda_p = p.lambda_d = lambda;
    const auto r = search_design(p, space_for(Strategy::fully_flexible), kTable);
    EXPECT_GE(r.best.grid.S(), 1.0);
    EXPECT_LE(r.best.grid.S(), 2.0) << "lambda " << lambda;
  }
}

TEST(SearchDesign, EveryComboInfeasible) {
  auto p = table2_preset();
  p.lambda_p = p.lambda_d = 100000;
  auto sp = space_for(Strategy::fully_flexible);
  sp.K_values = {1, 2};
  sp.M_values = sp.N_values = {1};
  EXPECT_THROW(search_design(p, sp, kTable), InfeasibleError);
}

TEST(SearchDesign, Deterministic) {
  const auto p = table2_preset();
  auto sp = space_for(Strategy::semi_flexible);
  const auto a = search_design(p, sp, kTable);
  sp.workers = 1;
  const auto b = search_design(p, sp, kTable);
  EXPECT_EQ(a.cost.GC, b.cost.GC);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) EXPECT_EQ(a.log[i].GC, b.log[i].GC);
}

TEST(CompareStrategies, SemiFlexibleSavesAboutThreePercent) {
  const auto c = compare_strategies(table2_preset(), SearchSpace{}, kTable);
  EXPECT_NEAR(c.sf_saving_pct, 3.1, 1.0);
  EXPECT_NEAR(c.ff_metrics.GC, 18.29, 0.02 * 18.29);
  EXPECT_NEAR(c.sf_metrics.GC, 17.73, 0.02 * 17.73);
  EXPECT_NEAR(c.ff_metrics.H_d, 5.0, 1e-9);
  EXPECT_NEAR(c.sf_metrics.H_d, 5.0, 1e-9);
}

TEST(CompareStrategies, FullyFlexibleWinsAtLowDensity) {
  auto p = table2_preset();
  p.lambda_p = p.lambda_d = 10;
  const auto c = compare_strategies(p, SearchSpace{}, kTable);
  EXPECT_LT(c.ff.cost.GC, c.sf.cost.GC);
}

TEST(Separability, ComboOptimumMatchesJointSearch) {
  const auto p = table2_preset();
  SearchSpace sp;
  struct Case {
    Strategy s;
    int M, N, K;
    std::optional<SwathConfig> swath;
  };
  const Case cases[] = {
      {Strategy::fully_flexible, 2, 2, 8, std::nullopt},
      {Strategy::fully_flexible, 1, 2, 12, std::nullopt},
      {Strategy::fully_flexible, 1, 3, 9, std::nullopt},
      {Strategy::semi_flexible, 1, 4, 9, SwathConfig{0.5, 1, StripAxis::along_width}},
      {Strategy::semi_flexible, 2, 1, 14, SwathConfig{0.5, 2, StripAxis::along_length}},
  };
  for (const auto& c : cases) {
    sp.strategy = c.s;
    const auto d = optimize_combo(p, sp, kTable, c.M, c.N, c.K, c.swath);
    ASSERT_TRUE(d);
    const double sep = total_generalized_cost(p, *d, kTable).GC;
    const double joint = oracle::joint_combo_gc(p, c.s, kTable, c.M, c.N, c.K, c.swath);
    EXPECT_LE(sep, joint * (1 + 1e-3)) << c.M << "x" << c.N << " K=" << c.K;
    EXPECT_GE(sep, joint * (1 - 1e-3));
  }
}
