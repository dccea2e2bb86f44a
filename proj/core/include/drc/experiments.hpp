#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drc/optimizer.hpp"
#include "drc/simulator.hpp"

namespace drc {

enum class SweepAxis { lambda, region_area, aspect_ratio, theta, alpha };

SweepAxis parse_sweep_axis(const std::string& text);
std::string to_string(SweepAxis axis);

/// Base scenario with one axis moved. lambda moves both directions;
/// region_area keeps a square region; aspect_ratio keeps L*W = 4 km^2
/// with L/W equal to the value.
ScenarioParams apply_axis(const ScenarioParams& base, SweepAxis axis, double value);

struct SweepSpec {
  SweepAxis axis = SweepAxis::lambda;
  std::vector<double> values;  // strictly increasing
  ScenarioParams base;
  std::vector<Strategy> strategies{Strategy::fully_flexible, Strategy::semi_flexible};
};

struct SweepRow {
  double value = 0.0;
  Strategy strategy = Strategy::fully_flexible;
  bool feasible = false;
  std::string note;
  Table5Metrics metrics;
  double aspect = 0.0;  // zone l / w
};

/// One search per value and strategy, in value order. Infeasible points
/// become rows with feasible = false.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SearchSpace& space, const KStarModel& model);

/// Demand density where GC(a) - GC(b) changes sign, bisected on the joint
/// lambda until the bracket is no wider than `width`. Throws
/// PreconditionError when the endpoints do not straddle a sign change.
double find_critical_density(const ScenarioParams& base, const SearchSpace& space, const KStarModel& model,
                             double lo, double hi, Strategy a = Strategy::fully_flexible,
                             Strategy b = Strategy::semi_flexible, double width = 0.5);

StrategyComparison run_table5(const ScenarioParams& p, const SearchSpace& space, const KStarModel& model);

struct NamedScenario {
  std::string name;
  ScenarioParams params;
};

/// lambda in {10, 40}, alpha in {0.3, 0.9}, theta in {5, 20}, L and W in
/// {2, 3}; other values from the base.
std::vector<NamedScenario> validation_grid(const ScenarioParams& base);

struct CampaignRow {
  std::string scenario;
  Strategy strategy = Strategy::fully_flexible;
  DesignSolution design;
  ValidationReport report;
};

struct ErrorSummary {
  double avg = 0.0;
  double max = 0.0;
};

/// Average and maximum over scenarios of each validation metric.
struct CampaignTable {
  Strategy strategy = Strategy::fully_flexible;
  ErrorSummary gc, tour_p, tour_d, pickup, dropoff, overcapacity;
};

struct CampaignResult {
  std::vector<CampaignRow> rows;
  CampaignTable ff;
  CampaignTable sf;
};

/// Optimizes each scenario for each strategy, then validates the frozen
/// design with seed derived from (seed, scenario index, strategy).
CampaignResult run_validation_campaign(const std::vector<NamedScenario>& scenarios,
                                       const std::vector<Strategy>& strategies, const SearchSpace& space,
                                       const KStarModel& model, std::uint64_t seed,
                                       const ValidationSpec& vspec = {});

}  // namespace drc
