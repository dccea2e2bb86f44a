#include "drc/expectations.hpp"

#include <cmath>
#include <random>

#include "drc/error.hpp"
#include "drc/random.hpp"

namespace drc {
namespace {

void require_mean(OccupancyLaw law) {
  if (!(law.mean >= 0.0) || !std::isfinite(law.mean)) {
    throw PreconditionError("occupancy mean must be finite and >= 0");
  }
}

// g(x) = x^a exp(b x^c) and its second derivative.
double g_value(double x, double a, double b, double c) {
  return std::pow(x, a) * std::exp(b * std::pow(x, c));
}

double g_second(double x, double a, double b, double c) {
  const double e = std::exp(b * std::pow(x, c));
  return e * (a * (a - 1.0) * std::pow(x, a - 2.0) +
              b * c * (a + c - 1.0) * std::pow(x, a + c - 2.0) +
              a * b * c * std::pow(x, a + c - 2.0) +
              b * b * c * c * std::pow(x, a + 2.0 * c - 2.0));
}

// Second-order expansion of E[x^p] at x = mu + 1 with variance mu.
double power_term(double mu, double p) {
  const double x = mu + 1.0;
  return std::pow(x, p) + p * (p - 1.0) * std::pow(x, p - 2.0) * mu / 2.0;
}

}  // namespace

PoissonMoments poisson_moments(OccupancyLaw law) {
  require_mean(law);
  return {law.mean, law.mean * law.mean + law.mean};
}

double expected_weibull_power(OccupancyLaw law, const KStarModel& model, double exponent_offset) {
  require_mean(law);
  const double x = law.mean + 1.0;
  const double a = model.beta3 + exponent_offset;
  const double b = model.beta4;
  const double c = model.beta5;
  return g_value(x, a, b, c) + g_second(x, a, b, c) * law.mean / 2.0;
}

double expected_ff_wait_kernel(OccupancyLaw law, const KStarModel& model) {
  return expected_weibull_power(law, model, 1.5) - expected_weibull_power(law, model, 0.5);
}

double expected_tour_factor(OccupancyLaw law, const KStarModel& model, double S,
                            double exponent_offset) {
  require_mean(law);
  if (model.form == KStarForm::weibull) {
    return model.shape_factor(S) * expected_weibull_power(law, model, exponent_offset);
  }
  // 1.1055 x^p - 0.008 x^(p+1) + 1.0297 S x^(p-1)
  const double p = exponent_offset;
  return 1.1055 * power_term(law.mean, p) - 0.008 * power_term(law.mean, p + 1.0) +
         1.0297 * S * power_term(law.mean, p - 1.0);
}

double mc_expectation_oracle(OccupancyLaw law, const std::function<double(int)>& f, long n_draws,
                             std::uint64_t seed) {
  require_mean(law);
  if (n_draws < 10000) throw PreconditionError("oracle needs at least 1e4 draws");
  auto rng = make_rng(seed, {0x0ac1eULL});
  std::poisson_distribution<int> draw(law.mean);
  double sum = 0.0;
  for (long i = 0; i < n_draws; ++i) sum += f(law.mean > 0.0 ? draw(rng) : 0);
  return sum / static_cast<double>(n_draws);
}

}  // namespace drc
