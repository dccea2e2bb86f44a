#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "drc/error.hpp"
#include "drc/parallel.hpp"
#include "drc/random.hpp"
#include "drc/tour_length.hpp"

namespace drc {
namespace {

// Residuals k_model(q_i, S_i) - mean_i for Eigen's Levenberg-Marquardt.
struct WeibullResidual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const CalibrationGrid* grid;

  int inputs() const { return 5; }
  int values() const { return static_cast<int>(grid->cells.size()); }

  int operator()(const Eigen::VectorXd& b, Eigen::VectorXd& r) const {
    for (int i = 0; i < values(); ++i) {
      const auto& c = grid->cells[i];
      const double q = c.q;
      r[i] = (b[0] * c.S + b[1]) * std::pow(q, b[2]) * std::exp(b[3] * std::pow(q, b[4])) -
             c.mean_kstar;
    }
    return 0;
  }

  int df(const Eigen::VectorXd& b, Eigen::MatrixXd& J) const {
    for (int i = 0; i < values(); ++i) {
      const auto& c = grid->cells[i];
      const double q = c.q;
      const double lq = std::log(q);
      const double qb5 = std::pow(q, b[4]);
      const double core = std::pow(q, b[2]) * std::exp(b[3] * qb5);
      const double k = (b[0] * c.S + b[1]) * core;
      J(i, 0) = c.S * core;
      J(i, 1) = core;
      J(i, 2) = k * lq;
      J(i, 3) = k * qb5;
      J(i, 4) = k * b[3] * qb5 * lq;
    }
    return 0;
  }
};

}  // namespace

const CalibrationCell& CalibrationGrid::at(int q, double S) const {
  for (const auto& c : cells) {
    if (c.q == q && std::abs(c.S - S) < 1e-12) return c;
  }
  throw PreconditionError("no calibration cell for q=" + std::to_string(q) +
                          " S=" + std::to_string(S));
}

CalibrationCell calibrate_cell(const CalibrationSpec& spec, int q, double S, std::uint64_t seed) {
  if (q < 2 || q > kMaxExactPoints) {
    throw CapacityError("calibration q=" + std::to_string(q) + " outside exact solver range");
  }
  // Unit area rectangle: sqrt(S) x 1/sqrt(S).
  const double side_x = std::sqrt(S);
  const double side_y = 1.0 / side_x;
  const auto S_key = static_cast<std::uint64_t>(std::llround(S * 1000.0));

  CalibrationCell cell;
  cell.q = q;
  cell.S = S;
  double sum = 0.0;
  double sum_sq = 0.0;
  long n = 0;
  std::vector<Point> pts(q);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (;;) {
    const double before = n > 0 ? sum / n : 0.0;
    for (int b = 0; b < spec.batch_size; ++b, ++n) {
      auto rng = make_rng(seed, {static_cast<std::uint64_t>(q), S_key, static_cast<std::uint64_t>(n)});
      for (auto& p : pts) {
        p.x = unit(rng) * side_x;
        p.y = unit(rng) * side_y;
      }
      const double k = exact_tour_length(pts, spec.mode) / std::sqrt(static_cast<double>(q));
      sum += k;
      sum_sq += k * k;
    }
    const double mean = sum / n;
    cell.last_batch_change = std::abs(mean - before);
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    const double se = std::sqrt(var / (n - 1));
    if (n >= spec.min_instances && cell.last_batch_change <= spec.tolerance && se <= spec.tolerance) break;
    if (n >= spec.max_instances) {
      throw ConvergenceError("k* calibration cell (q=" + std::to_string(q) + ", S=" +
                             std::to_string(S) + ") did not converge after " + std::to_string(n) +
                             " instances");
    }
  }
  cell.n_instances = n;
  cell.mean_kstar = sum / n;
  cell.std_kstar = std::sqrt(std::max(0.0, sum_sq / n - cell.mean_kstar * cell.mean_kstar));
  return cell;
}

KStarModel fit_kstar(const CalibrationGrid& grid, const KStarModel& initial) {
  WeibullResidual functor{&grid};
  Eigen::VectorXd b(5);
  b << initial.beta1, initial.beta2, initial.beta3, initial.beta4, initial.beta5;
  Eigen::LevenbergMarquardt<WeibullResidual> lm(functor);
  lm.parameters.xtol = 1e-12;
  lm.parameters.ftol = 1e-12;
  lm.parameters.maxfev = 10000;
  lm.minimize(b);
  return KStarModel{b[0], b[1], b[2], b[3], b[4]};
}

double model_mape(const KStarModel& model, const CalibrationGrid& grid) {
  std::vector<double> est, truth;
  for (const auto& c : grid.cells) {
    est.push_back(kstar(model, c.q, c.S));
    truth.push_back(c.mean_kstar);
  }
  return mape(est, truth);
}

double model_max_ape(const KStarModel& model, const CalibrationGrid& grid) {
  double worst = 0.0;
  for (const auto& c : grid.cells) {
    worst = std::max(worst, 100.0 * std::abs(kstar(model, c.q, c.S) - c.mean_kstar) / c.mean_kstar);
  }
  return worst;
}

CalibrationResult calibrate_kstar(const CalibrationSpec& spec, std::uint64_t seed,
                                  const KStarModel& initial) {
  CalibrationResult result;
  result.grid.spec = spec;
  for (const int q : spec.q_values) {
    for (const double S : spec.S_values) result.grid.cells.push_back({q, S});
  }
  auto& cells = result.grid.cells;
  parallel_for(cells.size(), [&](std::size_t i) {
    cells[i] = calibrate_cell(spec, cells[i].q, cells[i].S, seed);
  });
  result.model = fit_kstar(result.grid, initial);
  result.fit_mape = model_mape(result.model, result.grid);
  return result;
}

}  // namespace drc
