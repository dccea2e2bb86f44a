#include <gtest/gtest.h>

#include <cmath>

#include "drc/error.hpp"
#include "drc/expectations.hpp"
#include "oracles.hpp"

using namespace drc;

namespace {

const KStarModel kTable = KStarModel::table1();

double g_exact(double mean, double offset) {
  const double a = kTable.beta3 + offset;
  return oracle::poisson_expectation(mean, [&](int q) {
    const double x = q + 1.0;
    return std::pow(x, a) * std::exp(kTable.beta4 * std::pow(x, kTable.beta5));
  });
}

double g_mc(double mean, double offset, std::uint64_t seed) {
  const double a = kTable.beta3 + offset;
  return mc_expectation_oracle({mean}, [&](int q) {
    const double x = q + 1.0;
    return std::pow(x, a) * std::exp(kTable.beta4 * std::pow(x, kTable.beta5));
  }, 1000000, seed);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(PoissonMoments, Examples) {
  const auto m = poisson_moments({10.0 / 3});
  EXPECT_NEAR(m.EQ, 3.3333, 1e-4);
  EXPECT_NEAR(m.EQ2, 14.4444, 1e-4);
  EXPECT_EQ(poisson_moments({1}).EQ2, 2.0);
  EXPECT_EQ(poisson_moments({4}).EQ2, 20.0);
  for (const double mu : {0.1, 0.5, 2.0, 7.25, 19.0}) {
    const auto mm = poisson_moments({mu});
    EXPECT_NEAR(mm.EQ2 - mm.EQ * mm.EQ, mm.EQ, 1e-12 * std::max(1.0, mm.EQ2));
  }
  EXPECT_THROW(poisson_moments({-1}), PreconditionError);
}

TEST(WeibullPower, DegenerateMeanIsPointValue) {
  const double g1 = std::exp(kTable.beta4);  // 1^a * exp(b4 * 1)
  EXPECT_DOUBLE_EQ(expected_weibull_power({0}, kTable, 1.5), g1);
  EXPECT_DOUBLE_EQ(expected_weibull_power({0}, kTable, 0.5), g1);
}

TEST(WeibullPower, FrozenValues) {
  EXPECT_NEAR(expected_weibull_power({10.0 / 3}, kTable, 1.5), 7.116682217361576, 1e-12);
  EXPECT_NEAR(expected_weibull_power({10.0 / 3}, kTable, 0.5), 1.5030586714546466, 1e-12);
  EXPECT_NEAR(expected_weibull_power({1}, kTable, 0.5), 0.6115625607882761, 1e-12);
}

TEST(WeibullPower, SecondDerivativeMatchesFiniteDifference) {
  // At zero variance the expansion is g itself, so the curvature term can be
  // isolated as (value(mu) - g(mu+1)) * 2 / mu and compared with a central
  // difference of g.
  for (const double offset : {0.5, 1.5}) {
    const double a = kTable.beta3 + offset;
    auto g = [&](double x) { return std::pow(x, a) * std::exp(kTable.beta4 * std::pow(x, kTable.beta5)); };
    for (const double mu : {0.7, 2.0, 5.5, 11.0}) {
      const double x = mu + 1, h = 1e-4;
      const double fd = (g(x + h) - 2 * g(x) + g(x - h)) / (h * h);
      const double curv = (expected_weibull_power({mu}, kTable, offset) - g(x)) * 2 / mu;
      EXPECT_NEAR(curv, fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(WeibullPower, MonteCarloExamples) {
  EXPECT_LT(rel(expected_weibull_power({10.0 / 3}, kTable, 1.5), g_mc(10.0 / 3, 1.5, 11)), 0.02);
  EXPECT_LT(rel(expected_weibull_power({8}, kTable, 0.5), g_mc(8, 0.5, 12)), 0.02);
}

TEST(WeibullPower, ExpansionWithinTwoPercentForModerateMeans) {
  // Below a mean of about 2.2 the offset-1/2 expansion drifts past 2%.
  for (double mu = 2.5; mu <= 12.0; mu += 0.5) {
    for (const double offset : {0.5, 1.5}) {
      EXPECT_LT(rel(expected_weibull_power({mu}, kTable, offset), g_exact(mu, offset)), 0.02)
          << "mean " << mu << " offset " << offset;
    }
  }
}

TEST(WeibullPower, FiniteAndContinuous) {
  double prev = expected_weibull_power({1e-6}, kTable, 0.5);
  for (double mu = 0.01; mu <= 20; mu += 0.01) {
    const double v = expected_weibull_power({mu}, kTable, 0.5);
    ASSERT_TRUE(std::isfinite(v));
    EXPECT_LT(std::abs(v - prev), 0.05);
    prev = v;
  }
}

TEST(WaitKernel, DifferenceOfComponents) {
  for (const double mu : {0.3, 1.0, 10.0 / 3, 9.0}) {
    EXPECT_EQ(expected_ff_wait_kernel({mu}, kTable),
              expected_weibull_power({mu}, kTable, 1.5) - expected_weibull_power({mu}, kTable, 0.5));
  }
}

TEST(WaitKernel, MonteCarloExamples) {
  for (const double mu : {10.0 / 3, 1.0}) {
    const double mc = g_mc(mu, 1.5, 21) - g_mc(mu, 0.5, 21);
    EXPECT_LT(rel(expected_ff_wait_kernel({mu}, kTable), mc), 0.02) << mu;
  }
}

TEST(TourFactor, WeibullFormScalesByShape) {
  for (const double S : {1.0, 2.0}) {
    EXPECT_DOUBLE_EQ(expected_tour_factor({4}, kTable, S, 0.5),
                     kTable.shape_factor(S) * expected_weibull_power({4}, kTable, 0.5));
  }
}

TEST(TourFactor, YangFormNearExactForLargeMeans) {
  const auto y = KStarModel::yang();
  for (const double mu : {4.0, 8.0}) {
    const double exact = oracle::poisson_expectation(mu, [&](int q) {
      const double x = q + 1.0;
      return kstar(y, x, 1.5) * std::sqrt(x);
    });
    EXPECT_LT(rel(expected_tour_factor({mu}, y, 1.5, 0.5), exact), 0.02);
  }
}

TEST(McOracle, Examples) {
  EXPECT_NEAR(mc_expectation_oracle({5}, [](int q) { return double(q); }, 1000000, 1), 5.0, 0.01);
  EXPECT_NEAR(mc_expectation_oracle({5}, [](int q) { return double(q) * q; }, 1000000, 1), 30.0, 0.1);
  auto f = [](int q) { return std::sqrt(q + 1.0); };
  const double a = mc_expectation_oracle({4}, f, 10000, 3);
  EXPECT_EQ(a, mc_expectation_oracle({4}, f, 10000, 3));
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_THROW(mc_expectation_oracle({4}, f, 9999, 3), PreconditionError);
}
