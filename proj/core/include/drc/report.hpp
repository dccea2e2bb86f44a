#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "drc/experiments.hpp"

namespace drc {

/// q,S,mean_kstar,std_kstar,n_instances,last_batch_change followed by
/// `# beta1=...` coefficient lines.
void write_calibration_csv(std::ostream& os, const CalibrationResult& r);
/// Rows q, one column per S.
void write_tableB1_csv(std::ostream& os, const CalibrationGrid& grid);
/// beta1..beta5 of a weibull-form model, one `name,value` row each.
void write_kstar_coefficients_csv(std::ostream& os, const KStarModel& m);
/// Reads what write_kstar_coefficients_csv or write_calibration_csv wrote.
KStarModel read_kstar_coefficients(std::istream& is);

void write_swath_gap_csv(std::ostream& os, const std::vector<SwathGapRow>& rows);

/// One row per zone and component plus `all` aggregate rows.
void write_cost_breakdown_csv(std::ostream& os, const DesignSolution& d, const CostBreakdown& c);
void write_search_log_csv(std::ostream& os, const OptimizationResult& r);

/// The eighteen head-to-head rows.
void write_table5_csv(std::ostream& os, const StrategyComparison& c);

/// Error rows x {Average, Maximum} for one strategy.
void write_validation_table_csv(std::ostream& os, const CampaignTable& t);
/// One row per scenario and strategy.
void write_validation_runs_csv(std::ostream& os, const CampaignResult& r);

void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<SweepRow>& rows);

std::string design_to_json(const DesignSolution& d, const CostBreakdown* cost = nullptr, int indent = 2);
DesignSolution design_from_json(const std::string& text);

}  // namespace drc
