#pragma once

#include <cstdint>
#include <functional>

#include "drc/tour_length.hpp"

namespace drc {

/// Poisson count of patrons per dispatch, mean = lambda * H * l * w.
struct OccupancyLaw {
  double mean = 0.0;
};

struct PoissonMoments {
  double EQ = 0.0;
  double EQ2 = 0.0;
};

PoissonMoments poisson_moments(OccupancyLaw law);

/// Below this mean the second-order expansion can miss by more than 2%.
inline constexpr double kTaylorReliableMean = 0.5;

/// Second-order expansion of E[(Q+1)^(b3+offset) exp(b4 (Q+1)^b5)] about
/// E[Q]+1: g(mu+1) + g''(mu+1) * mu / 2. The shape factor b1*S+b2 is not
/// included. Only meaningful for the weibull form.
double expected_weibull_power(OccupancyLaw law, const KStarModel& model, double exponent_offset);

/// E[((Q+1)^(b3+3/2) - (Q+1)^(b3+1/2)) exp(b4 (Q+1)^b5)], expanded.
double expected_ff_wait_kernel(OccupancyLaw law, const KStarModel& model);

/// Second-order expansion of E[k*(Q+1, S) (Q+1)^offset] for any k* form.
/// For the weibull form this is shape_factor(S) * expected_weibull_power.
double expected_tour_factor(OccupancyLaw law, const KStarModel& model, double S,
                            double exponent_offset);

/// Sample mean of f(Q) over n_draws Poisson draws. Deterministic per seed.
double mc_expectation_oracle(OccupancyLaw law, const std::function<double(int)>& f, long n_draws,
                             std::uint64_t seed);

}  // namespace drc
