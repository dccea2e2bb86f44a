#pragma once

#include <cstdint>
#include <vector>

#include "drc/costs.hpp"

namespace drc {

struct Request {
  double x = 0.0;  // region coordinates, km
  double y = 0.0;
  double t = 0.0;  // request time within the hour, h
};

/// One hour of spatial Poisson demand over the whole region.
struct DemandRealization {
  std::vector<Request> outbound;
  std::vector<Request> inbound;
};

DemandRealization generate_demand(const ScenarioParams& p, std::uint64_t seed);

/// Realized hourly rates of one simulated hour. Only dispatches whose
/// collection window lies fully inside the hour enter the rates; patrons
/// in trailing partial windows are still served and counted.
struct SimRun {
  CostTerms terms;  // h per hour
  double GC = 0.0;  // h per hour
  double tour_km_p = 0.0;  // local-tour km per hour, outbound
  double tour_km_d = 0.0;
  double pickup_loss = 0.0;   // patron-h per hour lost to outbound stops
  double dropoff_loss = 0.0;  // patron-h per hour lost to inbound stops
  long dispatches = 0;        // full-window dispatches, both directions
  long overcapacity_events = 0;
  long requests = 0;  // generated
  long served = 0;    // assigned to some dispatch
  double sum_Q_p = 0.0;  // patrons over full-window outbound dispatches
  long dispatches_p = 0;
  bool heuristic_fallback = false;  // some batch exceeded the exact solver
};

/// Fully flexible: per zone, requests are batched into windows of H; at
/// each window end the bus runs the exact closed tour through the batch
/// and a uniformly placed dispatch point.
SimRun simulate_ff_hour(const ScenarioParams& p, const DesignSolution& design, const KStarModel& model,
                        const DemandRealization& demand, std::uint64_t aux_seed);

/// Semi-flexible: buses sweep the zone's strips boustrophedon-wise and
/// pick up every request placed before their nominal passage.
SimRun simulate_sf_hour(const ScenarioParams& p, const DesignSolution& design, const KStarModel& model,
                        const DemandRealization& demand, std::uint64_t aux_seed);

/// Analytic counterparts of the simulated rates.
struct AnalyticRates {
  double GC = 0.0;
  double tour_km_p = 0.0;
  double tour_km_d = 0.0;
  double pickup_loss = 0.0;
  double dropoff_loss = 0.0;
};

AnalyticRates analytic_rates(const ScenarioParams& p, const DesignSolution& design, const KStarModel& model);

struct ValidationReport {
  long n_runs = 0;
  double gc_mean = 0.0;  // simulated GC, min per patron
  double gc_std = 0.0;   // across runs
  double gc_se = 0.0;    // standard error of the mean
  double analytic_gc = 0.0;  // min per patron
  double err_gc = 0.0;       // percent, |analytic - simulated| / simulated
  double err_tour_p = 0.0;
  double err_tour_d = 0.0;
  double err_pickup = 0.0;
  double err_dropoff = 0.0;
  double overcapacity_pct = 0.0;
  double mean_Q_p = 0.0;  // simulated mean outbound occupancy per dispatch
  bool heuristic_fallback = false;
  bool converged = false;
};

struct ValidationSpec {
  long min_runs = 1000;
  long max_runs = 100000;
  long batch = 250;
  double se_threshold = 0.05;  // min per patron
  unsigned workers = 0;
};

/// Repeats simulated hours with sub-seeds (seed, run) until min_runs and
/// the standard error of GC per patron falls below the threshold. Throws
/// ConvergenceError at max_runs.
ValidationReport run_validation(const ScenarioParams& p, const DesignSolution& design,
                                const KStarModel& model, std::uint64_t seed,
                                const ValidationSpec& spec = {});

}  // namespace drc
