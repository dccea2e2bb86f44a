#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drc/costs.hpp"

namespace drc {

struct SearchSpace {
  std::vector<int> K_values{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  std::vector<int> M_values{1, 2, 3, 4, 5, 6};
  std::vector<int> N_values{1, 2, 3, 4, 5, 6};
  std::vector<int> gamma_values{1, 2, 3, 4, 5};
  int n_starts = 20;
  int max_strips = 4;
  Strategy strategy = Strategy::fully_flexible;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// Largest H with lambda*H*l*w + 2 sqrt(lambda*H*l*w) <= K.
double headway_cap_from_capacity(double lambda, double l, double w, int K);

/// Headways are refined to this resolution (0.1 s).
inline constexpr double kHeadwayTolerance = 0.1 / 3600.0;

struct HeadwayChoice {
  double H = 0.0;
  double cost = 0.0;  // outbound-dependent cost of the zone, h per hour
};

/// Minimizes the zone's outbound-dependent cost over
/// [H_min, min(H_max, H_cap)]: a uniform grid of n_starts+1 points seeds a
/// golden-section refinement around every local minimum. nullopt when the
/// interval is empty.
std::optional<HeadwayChoice> optimize_zone_headway(const ScenarioParams& p, const ZoneGrid& g,
                                                   ZoneIndex z, int K, Strategy s,
                                                   const KStarModel& model, double w0,
                                                   int n_starts = 20);

struct GammaChoice {
  int gamma = 1;
  double H_d = 0.0;
  double cost = 0.0;  // inbound-dependent cost of the zone, h per hour
};

/// Cheapest feasible gamma (ties to the smaller one). nullopt when none
/// satisfies the headway bounds and the capacity constraint.
std::optional<GammaChoice> optimize_zone_gamma(const ScenarioParams& p, const ZoneGrid& g, ZoneIndex z,
                                               int K, Strategy s, const KStarModel& model, double w0,
                                               const std::vector<int>& gamma_values = {1, 2, 3, 4, 5});

struct SearchLogEntry {
  int M = 0;
  int N = 0;
  int K = 0;
  double w0 = 0.0;  // 0 for fully flexible
  bool feasible = false;
  double GC = 0.0;  // h per hour; 0 when infeasible
  double GC_per_patron_min = 0.0;
  bool taylor_warning = false;
  std::string note;  // reason when infeasible
};

struct OptimizationResult {
  DesignSolution best;
  CostBreakdown cost;
  std::vector<SearchLogEntry> log;
  double wall_time_s = 0.0;
};

/// Best design for fixed (M, N, K, swath): every zone optimized on its own.
/// nullopt with `why` set when some zone has no feasible headway.
std::optional<DesignSolution> optimize_combo(const ScenarioParams& p, const SearchSpace& space,
                                             const KStarModel& model, int M, int N, int K,
                                             const std::optional<SwathConfig>& swath,
                                             std::string* why = nullptr);

/// Exhaustive search over M x N x K (x w0). Throws InfeasibleError
/// ("no feasible design") when every combination fails.
OptimizationResult search_design(const ScenarioParams& p, const SearchSpace& space,
                                 const KStarModel& model);

/// Head-to-head summary rows of an optimized design. Costs in min/patron,
/// headways in minutes; T, L and R are averaged over the two directions.
struct Table5Metrics {
  double GC = 0.0;
  double UC = 0.0;
  double AC = 0.0;
  double W = 0.0;
  double T = 0.0;
  double L = 0.0;
  double R = 0.0;
  int K = 0;
  int M = 0;
  int N = 0;
  double w0 = 0.0;
  double H_p = 0.0;
  double H_d = 0.0;
  double Q_p = 0.0;
  double Q_d = 0.0;
  double k_p = 0.0;
  double k_d = 0.0;
  double tour_p = 0.0;
  double tour_d = 0.0;
};

Table5Metrics table5_metrics(const ScenarioParams& p, const DesignSolution& design,
                             const CostBreakdown& cost, const KStarModel& model);

struct StrategyComparison {
  OptimizationResult ff;
  OptimizationResult sf;
  Table5Metrics ff_metrics;
  Table5Metrics sf_metrics;
  double sf_saving_pct = 0.0;  // (GC_ff - GC_sf) / GC_ff * 100
};

/// Runs search_design for both strategies (space.strategy is ignored).
StrategyComparison compare_strategies(const ScenarioParams& p, SearchSpace space, const KStarModel& model);

}  // namespace drc
