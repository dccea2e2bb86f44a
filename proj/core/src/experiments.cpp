#include "drc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <spdlog/spdlog.h>

#include "drc/error.hpp"
#include "drc/random.hpp"

namespace drc {
namespace {

double search_gc(const ScenarioParams& p, SearchSpace space, const KStarModel& model, Strategy s) {
  space.strategy = s;
  return search_design(p, space, model).cost.GC_per_patron_min();
}

std::string fmt_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void accumulate(ErrorSummary& e, double x, int n) {
  e.avg += (x - e.avg) / n;
  e.max = std::max(e.max, x);
}

}  // namespace

SweepAxis parse_sweep_axis(const std::string& text) {
  if (text == "lambda") return SweepAxis::lambda;
  if (text == "region_area") return SweepAxis::region_area;
  if (text == "aspect_ratio") return SweepAxis::aspect_ratio;
  if (text == "theta") return SweepAxis::theta;
  if (text == "alpha") return SweepAxis::alpha;
  throw ConfigError("unknown sweep axis '" + text + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::lambda: return "lambda";
    case SweepAxis::region_area: return "region_area";
    case SweepAxis::aspect_ratio: return "aspect_ratio";
    case SweepAxis::theta: return "theta";
    case SweepAxis::alpha: return "alpha";
  }
  return "?";
}

ScenarioParams apply_axis(const ScenarioParams& base, SweepAxis axis, double value) {
  ScenarioParams p = base;
  switch (axis) {
    case SweepAxis::lambda:
      p.lambda_p = p.lambda_d = value;
      break;
    case SweepAxis::region_area:
      p.L = p.W = std::sqrt(value);
      break;
    case SweepAxis::aspect_ratio:
      p.L = std::sqrt(4.0 * value);
      p.W = std::sqrt(4.0 / value);
      break;
    case SweepAxis::theta:
      p.theta = value;
      break;
    case SweepAxis::alpha:
      p.alpha = value;
      break;
  }
  validate(p);
  return p;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SearchSpace& space, const KStarModel& model) {
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) throw PreconditionError("sweep values must be strictly increasing");
  }
  std::vector<SweepRow> rows;
  for (const double v : spec.values) {
    const auto p = apply_axis(spec.base, spec.axis, v);
    for (const auto s : spec.strategies) {
      SweepRow row;
      row.value = v;
      row.strategy = s;
      SearchSpace sp = space;
      sp.strategy = s;
      try {
        const auto r = search_design(p, sp, model);
        row.feasible = true;
        row.metrics = table5_metrics(p, r.best, r.cost, model);
        row.aspect = r.best.grid.l / r.best.grid.w;
      } catch (const InfeasibleError& e) {
        row.note = e.what();
        spdlog::warn("{}={} {}: {}", to_string(spec.axis), v, to_string(s), e.what());
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

double find_critical_density(const ScenarioParams& base, const SearchSpace& space, const KStarModel& model,
                             double lo, double hi, Strategy a, Strategy b, double width) {
  if (!(lo < hi) || !(width > 0.0)) throw PreconditionError("critical density needs lo < hi and width > 0");
  auto diff = [&](double lambda) {
    const auto p = apply_axis(base, SweepAxis::lambda, lambda);
    return search_gc(p, space, model, a) - search_gc(p, space, model, b);
  };
  double f_lo = diff(lo);
  const double f_hi = diff(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0) == (f_hi > 0)) {
    throw PreconditionError("no sign change of the GC difference on [" + fmt_value(lo) + ", " + fmt_value(hi) +
                            "]: " + fmt_value(f_lo) + " and " + fmt_value(f_hi) + " min/patron");
  }
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    const double f = diff(mid);
    spdlog::debug("critical density bracket [{}, {}], diff({}) = {}", lo, hi, mid, f);
    if (f == 0.0) return mid;
    if ((f > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

StrategyComparison run_table5(const ScenarioParams& p, const SearchSpace& space, const KStarModel& model) {
  return compare_strategies(p, space, model);
}

std::vector<NamedScenario> validation_grid(const ScenarioParams& base) {
  std::vector<NamedScenario> out;
  for (const double lambda : {10.0, 40.0}) {
    for (const double alpha : {0.3, 0.9}) {
      for (const double theta : {5.0, 20.0}) {
        for (const double L : {2.0, 3.0}) {
          for (const double W : {2.0, 3.0}) {
            ScenarioParams p = base;
            p.lambda_p = p.lambda_d = lambda;
            p.alpha = alpha;
            p.theta = theta;
            p.L = L;
            p.W = W;
            validate(p);
            std::ostringstream name;
            name << "lambda=" << lambda << ";alpha=" << alpha << ";theta=" << theta << ";L=" << L << ";W=" << W;
            out.push_back({name.str(), p});
          }
        }
      }
    }
  }
  return out;
}

CampaignResult run_validation_campaign(const std::vector<NamedScenario>& scenarios,
                                       const std::vector<Strategy>& strategies, const SearchSpace& space,
                                       const KStarModel& model, std::uint64_t seed, const ValidationSpec& vspec) {
  CampaignResult res;
  res.ff.strategy = Strategy::fully_flexible;
  res.sf.strategy = Strategy::semi_flexible;
  int n_ff = 0, n_sf = 0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    for (const auto s : strategies) {
      const auto& sc = scenarios[i];
      SearchSpace sp = space;
      sp.strategy = s;
      CampaignRow row;
      row.scenario = sc.name;
      row.strategy = s;
      try {
        row.design = search_design(sc.params, sp, model).best;
        row.report = run_validation(sc.params, row.design, model,
                                    derive_seed(seed, {i, static_cast<std::uint64_t>(s)}), vspec);
      } catch (const Error& e) {
        throw Error("scenario " + sc.name + " (" + to_string(s) + "): " + e.what());
      }
      spdlog::info("{} {}: GC error {:.2f}% over {} runs", sc.name, to_string(s), row.report.err_gc,
                   row.report.n_runs);
      auto& t = s == Strategy::fully_flexible ? res.ff : res.sf;
      const int n = s == Strategy::fully_flexible ? ++n_ff : ++n_sf;
      const auto& r = row.report;
      accumulate(t.gc, r.err_gc, n);
      accumulate(t.tour_p, r.err_tour_p, n);
      accumulate(t.tour_d, r.err_tour_d, n);
      accumulate(t.pickup, r.err_pickup, n);
      accumulate(t.dropoff, r.err_dropoff, n);
      accumulate(t.overcapacity, r.overcapacity_pct, n);
      res.rows.push_back(std::move(row));
    }
  }
  return res;
}

}  // namespace drc
