#include "drc/tour_length.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drc/error.hpp"

namespace drc {

double kstar(const KStarModel& model, double q, double S) {
  if (!(q >= 1.0)) throw PreconditionError("kstar requires q >= 1");
  if (!(S >= 1.0)) throw PreconditionError("kstar requires S >= 1");
  if (model.form == KStarForm::yang) return benchmark_kstar(BenchmarkKStar::yang, q, S);
  return model.shape_factor(S) * std::pow(q, model.beta3) *
         std::exp(model.beta4 * std::pow(q, model.beta5));
}

TourLengthEstimate expected_ff_tour_length(const KStarModel& model, double q, double l, double w) {
  const double S = l >= w ? l / w : w / l;
  TourLengthEstimate out;
  out.length = kstar(model, q, S) * std::sqrt(q * l * w);
  out.extrapolated = q > 15.0 || S > 3.0;
  return out;
}

double benchmark_kstar(BenchmarkKStar which, double q, double S) {
  switch (which) {
    case BenchmarkKStar::yang:
      return 1.1055 - 0.008 * q + 1.0297 * S / q;
    case BenchmarkKStar::chakraborti:
      return 0.93;
    case BenchmarkKStar::daganzo_swath:
      return 1.15;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double mape(const std::vector<double>& estimate, const std::vector<double>& truth) {
  if (estimate.size() != truth.size() || truth.empty()) {
    throw PreconditionError("mape needs equally sized, non-empty inputs");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    sum += std::abs(estimate[i] - truth[i]) / std::abs(truth[i]);
  }
  return 100.0 * sum / static_cast<double>(truth.size());
}

double swath_tour_length(double q, double A, double w0) {
  if (q < 0.0 || !(A > 0.0) || !(w0 > 0.0)) {
    throw PreconditionError("swath tour length needs q >= 0, A > 0, w0 > 0");
  }
  return q * w0 / 3.0 + A / w0;
}

std::vector<SwathConfig> feasible_swath_widths(double l, double w, int max_strips) {
  if (!(l > 0.0) || !(w > 0.0) || max_strips < 1) {
    throw PreconditionError("swath enumeration needs l, w > 0 and max_strips >= 1");
  }
  const double limit = std::min(l, w) * (1.0 + 1e-12);
  std::vector<SwathConfig> all;
  for (int i = 1; i <= max_strips; ++i) {
    if (w / i <= limit) all.push_back({w / i, i, StripAxis::along_length});
    if (l / i <= limit) all.push_back({l / i, i, StripAxis::along_width});
  }
  std::sort(all.begin(), all.end(), [](const SwathConfig& a, const SwathConfig& b) {
    if (a.w0 != b.w0) return a.w0 > b.w0;
    if (a.n_strips != b.n_strips) return a.n_strips < b.n_strips;
    return a.along == StripAxis::along_length && b.along != StripAxis::along_length;
  });
  std::vector<SwathConfig> out;
  for (const auto& c : all) {
    if (!out.empty() && std::abs(out.back().w0 - c.w0) <= 1e-12 * out.back().w0) {
      if (c.n_strips < out.back().n_strips) out.back() = c;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<SwathGapRow> constrained_swath_mape(double l, double w, const std::vector<int>& q_values,
                                                int max_strips) {
  const auto widths = feasible_swath_widths(l, w, max_strips);
  const double A = l * w;
  const double S = l >= w ? l / w : w / l;
  std::vector<SwathGapRow> rows;
  rows.reserve(q_values.size());
  for (const int q : q_values) {
    SwathGapRow row;
    row.q = q;
    row.S = S;
    row.constrained = std::numeric_limits<double>::infinity();
    for (const auto& c : widths) {
      const double len = swath_tour_length(q, A, c.w0);
      if (len < row.constrained) {
        row.constrained = len;
        row.best_w0 = c.w0;
      }
    }
    row.unconstrained = 2.0 * std::sqrt(q * A / 3.0);
    row.gap_pct = 100.0 * (row.constrained - row.unconstrained) / row.unconstrained;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SwathGapRow> swath_gap_table(const std::vector<int>& q_values,
                                         const std::vector<double>& S_values, int max_strips) {
  std::vector<SwathGapRow> rows;
  for (const double S : S_values) {
    const double l = std::sqrt(S);
    const auto part = constrained_swath_mape(l, 1.0 / l, q_values, max_strips);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace drc
