#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "drc/error.hpp"
#include "drc/experiments.hpp"
#include "drc/report.hpp"

using namespace drc;

namespace {

const KStarModel kTable = KStarModel::table1();

}  // namespace

TEST(ApplyAxis, MovesOneParameter) {
  const auto base = table2_preset();
  const auto l = apply_axis(base, SweepAxis::lambda, 75);
  EXPECT_EQ(l.lambda_p, 75);
  EXPECT_EQ(l.lambda_d, 75);
  const auto a = apply_axis(base, SweepAxis::region_area, 9);
  EXPECT_DOUBLE_EQ(a.L, 3);
  EXPECT_DOUBLE_EQ(a.W, 3);
  const auto s = apply_axis(base, SweepAxis::aspect_ratio, 4);
  EXPECT_DOUBLE_EQ(s.L * s.W, 4);
  EXPECT_DOUBLE_EQ(s.L / s.W, 4);
  EXPECT_EQ(apply_axis(base, SweepAxis::alpha, 0.7).alpha, 0.7);
  EXPECT_EQ(apply_axis(base, SweepAxis::theta, 12).theta, 12);
  EXPECT_THROW(apply_axis(base, SweepAxis::alpha, 1.5), ConfigError);
}

TEST(SweepAxisNames, RoundTrip) {
  for (const auto a : {SweepAxis::lambda, SweepAxis::region_area, SweepAxis::aspect_ratio, SweepAxis::theta,
                       SweepAxis::alpha}) {
    EXPECT_EQ(parse_sweep_axis(to_string(a)), a);
  }
  EXPECT_THROW(parse_sweep_axis("speed"), ConfigError);
}

TEST(Sweep, RejectsUnorderedValues) {
  SweepSpec spec;
  spec.base = table2_preset();
  spec.values = {10, 5};
  EXPECT_THROW(run_sweep(spec, SearchSpace{}, kTable), PreconditionError);
}

TEST(Sweep, ZoneCountGrowsWithDensity) {
  SweepSpec spec;
  spec.base = table2_preset();
  spec.values = {5, 20, 40, 80, 160};
  const auto rows = run_sweep(spec, SearchSpace{}, kTable);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto s : spec.strategies) {
    int prev = 0;
    for (const auto& r : rows) {
      if (r.strategy != s) continue;
      ASSERT_TRUE(r.feasible);
      const int zones = r.metrics.M * r.metrics.N;
      EXPECT_GE(zones, prev) << to_string(s) << " at " << r.value;
      prev = zones;
    }
  }
  std::ostringstream a, b;
  write_sweep_csv(a, spec.axis, rows);
  write_sweep_csv(b, spec.axis, run_sweep(spec, SearchSpace{}, kTable));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, InfeasiblePointBecomesGapRow) {
  SweepSpec spec;
  spec.base = table2_preset();
  spec.values = {40, 1e6};
  spec.strategies = {Strategy::fully_flexible};
  SearchSpace sp;
  sp.K_values = {8};
  sp.M_values = sp.N_values = {1, 2};
  const auto rows = run_sweep(spec, sp, kTable);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].feasible);
  EXPECT_FALSE(rows[1].feasible);
  EXPECT_FALSE(rows[1].note.empty());
}

TEST(CriticalDensity, NearTwentyOne) {
  const double c = find_critical_density(table2_preset(), SearchSpace{}, kTable, 2, 60);
  EXPECT_NEAR(c, 21, 3);
}

TEST(CriticalDensity, NoSignChange) {
  EXPECT_THROW(find_critical_density(table2_preset(), SearchSpace{}, kTable, 2, 10), PreconditionError);
}

TEST(HeadToHead, OccupancyAndSwath) {
  const auto c = run_table5(table2_preset(), SearchSpace{}, kTable);
  EXPECT_NEAR(c.ff_metrics.Q_p, 3.32, 0.05 * 3.32);
  EXPECT_NEAR(c.sf_metrics.Q_p, 4.54, 0.05 * 4.54);
  EXPECT_EQ(c.sf_metrics.w0, 0.5);
  EXPECT_NEAR(c.ff_metrics.UC + c.ff_metrics.AC, c.ff_metrics.GC, 1e-9);
  std::ostringstream os;
  write_table5_csv(os, c);
  int lines = 0;
  for (char ch : os.str()) lines += ch == '\n';
  EXPECT_EQ(lines, 20);
}

TEST(AlphaCrossover, ModerateDensity) {
  auto low = table2_preset();
  low.lambda_p = low.lambda_d = 15;
  low.alpha = 0.3;
  auto high = low;
  high.alpha = 0.7;
  const auto a = compare_strategies(low, SearchSpace{}, kTable);
  const auto b = compare_strategies(high, SearchSpace{}, kTable);
  EXPECT_LT(a.ff.cost.GC, a.sf.cost.GC);
  EXPECT_GT(b.ff.cost.GC, b.sf.cost.GC);
}

TEST(ValidationGrid, ThirtyTwoDistinctScenarios) {
  const auto grid = validation_grid(table2_preset());
  ASSERT_EQ(grid.size(), 32u);
  std::set<std::string> names;
  for (const auto& s : grid) {
    names.insert(s.name);
    EXPECT_NO_THROW(validate(s.params));
  }
  EXPECT_EQ(names.size(), 32u);
}

TEST(Campaign, SingleScenarioProducesBothTables) {
  ValidationSpec v;
  v.min_runs = 250;
  v.se_threshold = 1.0;
  const std::vector<NamedScenario> one{{"base", table2_preset()}};
  const auto r = run_validation_campaign(one, {Strategy::fully_flexible, Strategy::semi_flexible}, SearchSpace{},
                                         kTable, 3, v);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.ff.gc.avg, r.ff.gc.max);
  EXPECT_EQ(r.ff.gc.avg, r.rows[0].report.err_gc);
  EXPECT_EQ(r.rows[1].design.w0(), 0.5);
  std::ostringstream os;
  write_validation_table_csv(os, r.sf);
  EXPECT_NE(os.str().find("Errors in GC,"), std::string::npos);
  EXPECT_NE(os.str().find("Overcapacity,"), std::string::npos);
}
