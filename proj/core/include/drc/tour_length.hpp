#pragma once

#include <cstdint>
#include <vector>

#include "drc/tsp.hpp"

namespace drc {

/// Functional family of a tour-length scaling law.
///  - weibull: k* = (b1*S + b2) * q^b3 * exp(b4 * q^b5)
///  - yang:    k* = 1.1055 - 0.008 q + 1.0297 S / q (coefficients unused)
enum class KStarForm { weibull, yang };

/// Scaling constant k* of the expected tour length k* * sqrt(q A).
struct KStarModel {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  double beta4 = 0.0;
  double beta5 = 0.0;
  KStarForm form = KStarForm::weibull;

  /// Regression calibrated on exact Manhattan tours (q = 2..15, S = 1..3).
  static KStarModel table1() { return {0.1102, 1.4569, -0.1472, -2.5508, -2.6396}; }
  /// k* independent of q and S.
  static KStarModel constant(double k) { return {0.0, k, 0.0, 0.0, 0.0}; }
  static KStarModel yang() { return {0.0, 0.0, 0.0, 0.0, 0.0, KStarForm::yang}; }

  double shape_factor(double S) const noexcept { return beta1 * S + beta2; }
};

/// Evaluates k*(q, S). Requires q >= 1 and S >= 1 (q may be fractional
/// when evaluated at a mean occupancy).
double kstar(const KStarModel& model, double q, double S);

struct TourLengthEstimate {
  double length = 0.0;
  bool extrapolated = false;  // q > 15 or S > 3
};

/// k*(q, S) * sqrt(q l w) for a zone of size l x w.
TourLengthEstimate expected_ff_tour_length(const KStarModel& model, double q, double l, double w);

enum class BenchmarkKStar { yang, chakraborti, daganzo_swath };

/// Prior-work values: the Yang et al. regression, 0.93, and 1.15.
double benchmark_kstar(BenchmarkKStar which, double q, double S);

/// Mean absolute percentage error of an estimator against reference values.
double mape(const std::vector<double>& estimate, const std::vector<double>& truth);

// ---------------------------------------------------------------------------
// Calibration

struct CalibrationSpec {
  std::vector<int> q_values{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  std::vector<double> S_values{1.0, 1.5, 2.0, 3.0};
  int min_instances = 500;
  int batch_size = 100;
  double tolerance = 0.01;
  int max_instances = 50000;
  TourMode mode = TourMode::closed_cycle;
};

struct CalibrationCell {
  int q = 0;
  double S = 1.0;
  double mean_kstar = 0.0;
  double std_kstar = 0.0;
  long n_instances = 0;
  double last_batch_change = 0.0;
};

struct CalibrationGrid {
  CalibrationSpec spec;
  std::vector<CalibrationCell> cells;  // q-major, then S

  const CalibrationCell& at(int q, double S) const;
};

struct CalibrationResult {
  KStarModel model;
  CalibrationGrid grid;
  double fit_mape = 0.0;  // percent, fitted model vs grid means
};

/// Mean k = L / sqrt(q) of one calibration cell: uniform points in a
/// unit-area S x 1 rectangle, exact tours, drawn in batches until
/// min_instances is reached, the running mean moved by no more than the
/// tolerance over the last batch and its standard error is within the
/// tolerance too.
CalibrationCell calibrate_cell(const CalibrationSpec& spec, int q, double S, std::uint64_t seed);

/// Calibrates every cell (in parallel, deterministic per seed) and fits
/// the weibull-form coefficients by Levenberg-Marquardt from `initial`.
CalibrationResult calibrate_kstar(const CalibrationSpec& spec, std::uint64_t seed,
                                  const KStarModel& initial = KStarModel::table1());

/// Least-squares fit of the weibull form to the grid means.
KStarModel fit_kstar(const CalibrationGrid& grid, const KStarModel& initial);

/// MAPE (percent) of a model's k* against the grid means.
double model_mape(const KStarModel& model, const CalibrationGrid& grid);
/// Largest single-cell absolute percentage error.
double model_max_ape(const KStarModel& model, const CalibrationGrid& grid);

// ---------------------------------------------------------------------------
// Swath tours

/// Expected swath tour length q*w0/3 + A/w0.
double swath_tour_length(double q, double A, double w0);

/// Which zone dimension the strips run along.
enum class StripAxis { along_length, along_width };

/// A feasible cut of an l x w zone into n_strips strips of width w0.
/// along_length: strips stacked across w (w0 * n_strips == w), each l long.
/// along_width:  strips stacked across l (w0 * n_strips == l), each w long.
struct SwathConfig {
  double w0 = 0.0;
  int n_strips = 1;
  StripAxis along = StripAxis::along_length;

  /// Length of one strip.
  double strip_length(double l, double w) const noexcept {
    return along == StripAxis::along_length ? l : w;
  }
  /// The zone dimension that n_strips * w0 reconstructs.
  double cut_dimension(double l, double w) const noexcept {
    return along == StripAxis::along_length ? w : l;
  }
};

/// All w0 in {l/i, w/i : i <= max_strips} with w0 <= min(l, w), largest
/// first. Equal widths from both families keep the cut with fewer strips.
std::vector<SwathConfig> feasible_swath_widths(double l, double w, int max_strips = 4);

struct SwathGapRow {
  int q = 0;
  double S = 1.0;
  double best_w0 = 0.0;
  double constrained = 0.0;    // min over feasible w0 of swath_tour_length
  double unconstrained = 0.0;  // 2 sqrt(q A / 3)
  double gap_pct = 0.0;
};

/// Constrained versus unconstrained swath tour length for each q.
std::vector<SwathGapRow> constrained_swath_mape(double l, double w, const std::vector<int>& q_values,
                                                int max_strips = 4);

/// The same comparison over unit-area zones of each aspect ratio.
std::vector<SwathGapRow> swath_gap_table(const std::vector<int>& q_values,
                                         const std::vector<double>& S_values, int max_strips = 4);

}  // namespace drc
