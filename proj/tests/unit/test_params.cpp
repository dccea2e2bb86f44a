#include <gtest/gtest.h>

#include "drc/error.hpp"
#include "drc/params.hpp"

using namespace drc;

namespace {

std::string full_config() {
  return R"(# hand-written scenario
L = 2
W = 2
lambda_p = 40
lambda_d = 40
theta = 20
alpha = 0.3
pi_v_base = 0.0314
pi_v_perK = 0.0039
pi_m_base = 2.068
pi_m_perK = 0.108
pi_m_theta_mult = 2
tau_0 = 26/3600
tau_b = 4/3600
tau_a = 2/3600
tau_p = 30/3600
tau_d = 28/3600
v_l = 25
t_ft = 3/60
t_tf = 3/60
H_min = 3/60
H_max = 1
H_t = 5/60
)";
}

void expect_config_error(const std::string& text, const std::string& needle) {
  try {
    load_scenario(text);
    FAIL() << "expected ConfigError containing '" << needle << "'";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(LoadScenario, ReferencePreset) {
  const auto p = load_scenario("preset = table2");
  EXPECT_EQ(p.L, 2.0);
  EXPECT_EQ(p.W, 2.0);
  EXPECT_EQ(p.lambda_p, 40.0);
  EXPECT_EQ(p.lambda_d, 40.0);
  EXPECT_EQ(p.theta, 20.0);
  EXPECT_EQ(p.alpha, 0.3);
  EXPECT_EQ(p.v_l, 25.0);
  EXPECT_DOUBLE_EQ(p.H_t, 5.0 / 60.0);
  EXPECT_EQ(p, table2_preset());
}

TEST(LoadScenario, AlphaOutOfRange) {
  expect_config_error("preset = table2\nalpha = 1.2", "alpha outside [0,1]");
}

TEST(LoadScenario, TauConsistencyHolds) {
  const auto p = load_scenario(full_config());
  EXPECT_DOUBLE_EQ(p.tau_p, p.tau_0 + p.tau_b);
  EXPECT_DOUBLE_EQ(p.tau_d, p.tau_0 + p.tau_a);
  EXPECT_EQ(p, table2_preset());
}

TEST(LoadScenario, TauConsistencyViolated) {
  auto text = full_config();
  text.replace(text.find("tau_p = 30/3600"), 15, "tau_p = 31/3600");
  expect_config_error(text, "tau consistency");
}

TEST(LoadScenario, DwellDerivedFromTau0) {
  auto text = full_config();
  text.replace(text.find("tau_p = 30/3600"), 15, "");
  text.replace(text.find("tau_d = 28/3600"), 15, "");
  const auto p = load_scenario(text);
  EXPECT_DOUBLE_EQ(p.tau_p, 30.0 / 3600.0);
  EXPECT_DOUBLE_EQ(p.tau_d, 28.0 / 3600.0);
}

TEST(LoadScenario, MissingField) {
  auto text = full_config();
  text.replace(text.find("v_l = 25"), 8, "");
  expect_config_error(text, "missing field v_l");
}

TEST(LoadScenario, NonPositive) {
  expect_config_error("preset = table2\nv_l = 0", "non-positive value for v_l");
  expect_config_error("preset = table2\nlambda_p = -1", "non-positive value for lambda_p");
}

TEST(LoadScenario, UnknownKeyAndSyntax) {
  expect_config_error("preset = table2\nspeed = 3", "unknown key");
  expect_config_error("preset = table2\nL 3", "expected key = value");
  expect_config_error("preset = table2\nL = abc", "cannot parse");
}

TEST(LoadScenario, LambdaSetsBothDirections) {
  const auto p = load_scenario("preset = table2\nlambda = 15");
  EXPECT_EQ(p.lambda_p, 15.0);
  EXPECT_EQ(p.lambda_d, 15.0);
}

TEST(LoadScenario, PresetRoundTripsThroughText) {
  const auto p = table2_preset();
  EXPECT_EQ(load_scenario(to_config_text(p)), p);
}

TEST(MakeGrid, Examples) {
  auto p = table2_preset();
  auto g = make_grid(p, 2, 2);
  EXPECT_EQ(g.l, 1.0);
  EXPECT_EQ(g.w, 1.0);
  EXPECT_EQ(g.S(), 1.0);

  g = make_grid(p, 1, 4);
  EXPECT_EQ(g.l, 0.5);
  EXPECT_EQ(g.w, 2.0);
  EXPECT_EQ(g.S(), 4.0);

  p.L = 3.0;
  g = make_grid(p, 2, 3);
  EXPECT_EQ(g.l, 1.0);
  EXPECT_EQ(g.w, 1.0);
  EXPECT_EQ(g.S(), 1.0);

  EXPECT_THROW(make_grid(p, 0, 1), PreconditionError);
}

TEST(MakeGrid, AreasSumToRegion) {
  auto p = table2_preset();
  p.L = 3.7;
  p.W = 1.3;
  for (int M = 1; M <= 6; ++M) {
    for (int N = 1; N <= 6; ++N) {
      const auto g = make_grid(p, M, N);
      EXPECT_NEAR(g.zone_area() * g.zone_count(), p.area(), 1e-12 * p.area());
      EXPECT_NEAR(g.l * N, p.L, 1e-12 * p.L);
      EXPECT_NEAR(g.w * M, p.W, 1e-12 * p.W);
      EXPECT_GE(g.S(), 1.0);
    }
  }
}

TEST(LineHaul, Examples) {
  const auto p = table2_preset();
  EXPECT_EQ(line_haul_distance(make_grid(p, 3, 5), {1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(line_haul_distance(make_grid(p, 2, 2), {2, 2}), 2.0);
  EXPECT_DOUBLE_EQ(line_haul_distance(make_grid(p, 1, 4), {1, 4}), 1.5);
  EXPECT_THROW(line_haul_distance(make_grid(p, 1, 4), {2, 1}), PreconditionError);
}

TEST(LineHaul, MonotoneInRowAndColumn) {
  auto p = table2_preset();
  p.L = 3.0;
  const auto g = make_grid(p, 4, 5);
  for (int m = 1; m <= g.M; ++m) {
    for (int n = 1; n <= g.N; ++n) {
      if (m < g.M) EXPECT_LE(line_haul_distance(g, {m, n}), line_haul_distance(g, {m + 1, n}));
      if (n < g.N) EXPECT_LE(line_haul_distance(g, {m, n}), line_haul_distance(g, {m, n + 1}));
    }
  }
}

TEST(ZoneIndexing, FlatRoundTrip) {
  const auto g = make_grid(table2_preset(), 3, 4);
  for (int i = 0; i < g.zone_count(); ++i) EXPECT_EQ(flat_index(g, zone_at(g, i)), i);
}

TEST(UnitCosts, LinearInCapacity) {
  const auto p = table2_preset();
  EXPECT_DOUBLE_EQ(p.pi_v(8), 0.0314 + 0.0039 * 8);
  EXPECT_DOUBLE_EQ(p.pi_m(8), 2.068 + 0.108 * 8 + 2 * 20);
}
