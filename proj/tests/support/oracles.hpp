#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "drc/costs.hpp"
#include "drc/optimizer.hpp"
#include "drc/tsp.hpp"

namespace oracle {

/// E[f(Q)] for Q ~ Poisson(mean) by summing the pmf until the tail is negligible.
double poisson_expectation(double mean, const std::function<double(int)>& f);

std::vector<drc::Point> random_points(std::mt19937_64& rng, int q, double width = 1.0, double height = 1.0);

/// Smallest f over n+1 evenly spaced points of [lo, hi]; returns (argmin, min).
std::pair<double, double> dense_grid_min(const std::function<double(double)>& f, double lo, double hi, int n);

/// Joint optimum of one (M, N, K, swath) combination: every feasible gamma
/// vector is enumerated and, for each, all outbound headways are searched
/// together by multistart Nelder-Mead on the full generalized cost.
/// Returns the best GC (h per hour), or +inf when nothing is feasible.
double joint_combo_gc(const drc::ScenarioParams& p, drc::Strategy s, const drc::KStarModel& model, int M, int N,
                      int K, const std::optional<drc::SwathConfig>& swath, int starts = 6);

/// Published reference k* grid (two decimals): rows q = 2..15, columns S = 1, 1.5, 2, 3.
double table_b1(int q, double S);

}  // namespace oracle
