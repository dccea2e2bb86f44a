#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drc/params.hpp"
#include "drc/tour_length.hpp"

namespace drc {

enum class Strategy { fully_flexible, semi_flexible };
enum class Direction { outbound, inbound };

std::string to_string(Strategy s);
/// Accepts "ff", "sf", "fully_flexible", "semi_flexible".
Strategy parse_strategy(const std::string& text);

/// Headways of one zone. H_d = gamma * H_t.
struct ZoneDesign {
  ZoneIndex z;
  double H_p = 0.0;
  double H_d = 0.0;
  int gamma = 1;
};

struct DesignSolution {
  Strategy strategy = Strategy::fully_flexible;
  ZoneGrid grid;
  int K = 1;
  std::vector<ZoneDesign> zones;     // row-major, see flat_index
  std::optional<SwathConfig> swath;  // semi-flexible only

  double w0() const { return swath ? swath->w0 : 0.0; }
};

/// The nine hourly cost components, in hours of equivalent patron time.
struct CostTerms {
  double C_W = 0.0;
  double C_Tp = 0.0;
  double C_Td = 0.0;
  double C_Lp = 0.0;
  double C_Ld = 0.0;
  double C_Rp = 0.0;
  double C_Rd = 0.0;
  double C_vk = 0.0;
  double C_vh = 0.0;

  double sum() const noexcept { return C_W + C_Tp + C_Td + C_Lp + C_Ld + C_Rp + C_Rd + C_vk + C_vh; }
  double user() const noexcept { return C_W + C_Tp + C_Td + C_Lp + C_Ld + C_Rp + C_Rd; }
  double agency() const noexcept { return C_vk + C_vh; }
  CostTerms& operator+=(const CostTerms& o) noexcept;
};

struct CostBreakdown {
  CostTerms total;
  double GC = 0.0;  // h per hour
  std::vector<CostTerms> per_zone;
  double hourly_patrons = 0.0;
  bool taylor_warning = false;  // some zone's mean occupancy below kTaylorReliableMean

  /// Converts an hourly cost to minutes per patron.
  double per_patron_min(double hourly) const { return hourly / hourly_patrons * 60.0; }
  double GC_per_patron_min() const { return per_patron_min(GC); }
};

/// lambda * H * l * w for the zone and direction.
double mean_occupancy(const ScenarioParams& p, const ZoneGrid& g, double H, Direction d);

/// x + 2 sqrt(x) <= K with x the mean occupancy.
bool capacity_ok(double mean, int K);

// Fully-flexible zone terms.
double ff_wait_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd,
                         const KStarModel& model);
double ff_local_tour_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd,
                               const KStarModel& model, Direction d);
/// (distance cost, time cost) summed over both directions.
std::pair<double, double> ff_agency_cost_zone(const ScenarioParams& p, const ZoneGrid& g,
                                              const ZoneDesign& zd, const KStarModel& model, int K);

// Shared terms.
double line_haul_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd, Direction d);
double transfer_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd, Direction d);

// Semi-flexible zone terms.
double sf_wait_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd, double w0);
double sf_local_tour_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd,
                               double w0, Direction d);
std::pair<double, double> sf_agency_cost_zone(const ScenarioParams& p, const ZoneGrid& g,
                                              const ZoneDesign& zd, double w0, int K);

/// All nine terms of one zone.
CostTerms zone_cost_terms(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd,
                          Strategy s, const KStarModel& model, int K, double w0);

/// The terms of one zone that depend on one direction's headway only
/// (outbound: W, Tp, Lp, Rp and that direction's agency share).
double direction_cost_zone(const ScenarioParams& p, const ZoneGrid& g, ZoneIndex z, double H,
                           int gamma, Direction d, Strategy s, const KStarModel& model, int K,
                           double w0);

/// Throws InfeasibleError naming the first violated constraint and zone.
void check_design(const ScenarioParams& p, const DesignSolution& design);

/// Sums every zone. Validates the design first.
CostBreakdown total_generalized_cost(const ScenarioParams& p, const DesignSolution& design,
                                     const KStarModel& model);

}  // namespace drc
