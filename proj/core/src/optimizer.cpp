#include "drc/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include <boost/math/tools/minima.hpp>
#include <spdlog/spdlog.h>

#include "drc/error.hpp"
#include "drc/expectations.hpp"
#include "drc/parallel.hpp"

namespace drc {
namespace {

constexpr double kRelTie = 1e-9;

bool cost_less(double a, double b) { return a < b - kRelTie * std::max(std::abs(a), std::abs(b)); }

struct ComboTask {
  int M, N, K;
  std::optional<SwathConfig> swath;
};

struct ComboOutcome {
  std::optional<DesignSolution> design;
  CostBreakdown cost;
  std::string why;
};

double gamma_sum(const DesignSolution& d) {
  double s = 0;
  for (const auto& z : d.zones) s += z.gamma;
  return s;
}

double mean_Hp(const DesignSolution& d) {
  double s = 0;
  for (const auto& z : d.zones) s += z.H_p;
  return s / d.zones.size();
}

// Strict preference on equal cost: smaller K, fewer zones, smaller gammas,
// longer outbound headways, then fewer rows and wider swaths.
bool prefer(const DesignSolution& a, double ca, const DesignSolution& b, double cb) {
  if (cost_less(ca, cb)) return true;
  if (cost_less(cb, ca)) return false;
  if (a.K != b.K) return a.K < b.K;
  if (a.grid.zone_count() != b.grid.zone_count()) return a.grid.zone_count() < b.grid.zone_count();
  if (gamma_sum(a) != gamma_sum(b)) return gamma_sum(a) < gamma_sum(b);
  if (mean_Hp(a) != mean_Hp(b)) return mean_Hp(a) > mean_Hp(b);
  if (a.grid.M != b.grid.M) return a.grid.M < b.grid.M;
  return a.w0() > b.w0();
}

}  // namespace

double headway_cap_from_capacity(double lambda, double l, double w, int K) {
  if (!(lambda * l * w > 0.0) || K < 1) {
    throw PreconditionError("headway cap needs lambda*l*w > 0 and K >= 1");
  }
  const double root = std::sqrt(K + 1.0) - 1.0;
  return root * root / (lambda * l * w);
}

std::optional<HeadwayChoice> optimize_zone_headway(const ScenarioParams& p, const ZoneGrid& g,
                                                   ZoneIndex z, int K, Strategy s,
                                                   const KStarModel& model, double w0, int n_starts) {
  const double lo = p.H_min;
  const double hi = std::min(p.H_max, headway_cap_from_capacity(p.lambda_p, g.l, g.w, K));
  if (hi < lo) return std::nullopt;
  auto f = [&](double H) {
    return direction_cost_zone(p, g, z, H, 1, Direction::outbound, s, model, K, w0);
  };
  if (hi - lo <= kHeadwayTolerance) return HeadwayChoice{hi, f(hi)};

  const int n = std::max(2, n_starts);
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = lo + (hi - lo) * i / n;
    fs[i] = f(xs[i]);
  }
  HeadwayChoice best{xs[0], fs[0]};
  auto consider = [&](double H, double c) {
    if (cost_less(c, best.cost) || (!cost_less(best.cost, c) && H > best.H)) best = {H, c};
  };
  for (int i = 1; i <= n; ++i) consider(xs[i], fs[i]);

  // Tolerance in bits for Brent: relative step 0.1 s over the largest H.
  const int bits = std::clamp(static_cast<int>(std::ceil(-std::log2(kHeadwayTolerance / hi))) + 2, 8, 40);
  for (int i = 0; i <= n; ++i) {
    const bool left_ok = i == 0 || fs[i] <= fs[i - 1];
    const bool right_ok = i == n || fs[i] <= fs[i + 1];
    if (!left_ok || !right_ok) continue;
    const double a = xs[std::max(0, i - 1)];
    const double b = xs[std::min(n, i + 1)];
    const auto [H, c] = boost::math::tools::brent_find_minima(f, a, b, bits);
    consider(H, c);
  }
  return best;
}

std::optional<GammaChoice> optimize_zone_gamma(const ScenarioParams& p, const ZoneGrid& g, ZoneIndex z,
                                               int K, Strategy s, const KStarModel& model, double w0,
                                               const std::vector<int>& gamma_values) {
  if (gamma_values.empty()) throw PreconditionError("gamma range is empty");
  const double lo = std::max(p.H_min, p.H_t);
  const double cap = headway_cap_from_capacity(p.lambda_d, g.l, g.w, K);
  std::optional<GammaChoice> best;
  for (const int gamma : gamma_values) {
    const double H = gamma * p.H_t;
    if (H < lo * (1 - 1e-12) || H > p.H_max * (1 + 1e-12) || H > cap * (1 + 1e-12)) continue;
    const double c = direction_cost_zone(p, g, z, H, gamma, Direction::inbound, s, model, K, w0);
    if (!best || cost_less(c, best->cost) || (!cost_less(best->cost, c) && gamma < best->gamma)) {
      best = GammaChoice{gamma, H, c};
    }
  }
  return best;
}

std::optional<DesignSolution> optimize_combo(const ScenarioParams& p, const SearchSpace& space,
                                             const KStarModel& model, int M, int N, int K,
                                             const std::optional<SwathConfig>& swath, std::string* why) {
  DesignSolution d;
  d.strategy = space.strategy;
  d.grid = make_grid(p, M, N);
  d.K = K;
  d.swath = swath;
  const double w0 = d.w0();
  // Zones differ only by line-haul distance.
  std::map<double, ZoneDesign> memo;
  for (int i = 0; i < d.grid.zone_count(); ++i) {
    const ZoneIndex z = zone_at(d.grid, i);
    const double lh = line_haul_distance(d.grid, z);
    auto it = memo.find(lh);
    if (it == memo.end()) {
      const auto hp = optimize_zone_headway(p, d.grid, z, K, space.strategy, model, w0, space.n_starts);
      if (!hp) {
        if (why) *why = "outbound capacity: no headway in [H_min, min(H_max, H_cap)]";
        return std::nullopt;
      }
      const auto gd = optimize_zone_gamma(p, d.grid, z, K, space.strategy, model, w0, space.gamma_values);
      if (!gd) {
        if (why) *why = "inbound capacity or headway bounds: no feasible gamma";
        return std::nullopt;
      }
      it = memo.emplace(lh, ZoneDesign{z, hp->H, gd->H_d, gd->gamma}).first;
    }
    ZoneDesign zd = it->second;
    zd.z = z;
    d.zones.push_back(zd);
  }
  return d;
}

OptimizationResult search_design(const ScenarioParams& p, const SearchSpace& space,
                                 const KStarModel& model) {
  if (space.K_values.empty() || space.M_values.empty() || space.N_values.empty() ||
      space.gamma_values.empty()) {
    throw PreconditionError("search space has an empty range");
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<ComboTask> tasks;
  for (const int M : space.M_values) {
    for (const int N : space.N_values) {
      const auto g = make_grid(p, M, N);
      std::vector<std::optional<SwathConfig>> swaths{std::nullopt};
      if (space.strategy == Strategy::semi_flexible) {
        swaths.clear();
        for (const auto& c : feasible_swath_widths(g.l, g.w, space.max_strips)) swaths.emplace_back(c);
      }
      for (const int K : space.K_values) {
        for (const auto& sw : swaths) tasks.push_back({M, N, K, sw});
      }
    }
  }

  std::vector<ComboOutcome> outcomes(tasks.size());
  parallel_for(
      tasks.size(),
      [&](std::size_t i) {
        const auto& t = tasks[i];
        auto& o = outcomes[i];
        o.design = optimize_combo(p, space, model, t.M, t.N, t.K, t.swath, &o.why);
        if (o.design) {
          CostBreakdown c;
          c.hourly_patrons = p.hourly_patrons();
          for (const auto& zd : o.design->zones) {
            c.per_zone.push_back(zone_cost_terms(p, o.design->grid, zd, space.strategy, model, t.K,
                                                 o.design->w0()));
            c.total += c.per_zone.back();
            if (space.strategy == Strategy::fully_flexible &&
                mean_occupancy(p, o.design->grid, zd.H_p, Direction::outbound) < kTaylorReliableMean) {
              c.taylor_warning = true;
            }
          }
          c.GC = c.total.sum();
          o.cost = std::move(c);
        }
      },
      space.workers ? space.workers : default_workers());

  OptimizationResult result;
  result.log.reserve(tasks.size());
  const ComboOutcome* best = nullptr;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    const auto& o = outcomes[i];
    SearchLogEntry e;
    e.M = t.M;
    e.N = t.N;
    e.K = t.K;
    e.w0 = t.swath ? t.swath->w0 : 0.0;
    e.feasible = o.design.has_value();
    if (o.design) {
      e.GC = o.cost.GC;
      e.GC_per_patron_min = o.cost.GC_per_patron_min();
      e.taylor_warning = o.cost.taylor_warning;
      if (!best || prefer(*o.design, o.cost.GC, *best->design, best->cost.GC)) best = &o;
    } else {
      e.note = o.why;
      spdlog::debug("combo M={} N={} K={} w0={} infeasible: {}", t.M, t.N, t.K, e.w0, o.why);
    }
    result.log.push_back(std::move(e));
  }
  if (!best) throw InfeasibleError("no feasible design", to_string(space.strategy) + " search", "");
  result.best = *best->design;
  result.cost = total_generalized_cost(p, result.best, model);
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

Table5Metrics table5_metrics(const ScenarioParams& p, const DesignSolution& design,
                             const CostBreakdown& cost, const KStarModel& model) {
  Table5Metrics m;
  const auto& t = cost.total;
  m.GC = cost.per_patron_min(cost.GC);
  m.UC = cost.per_patron_min(t.user());
  m.AC = cost.per_patron_min(t.agency());
  m.W = cost.per_patron_min(t.C_W);
  m.T = cost.per_patron_min(t.C_Tp + t.C_Td) / 2.0;
  m.L = cost.per_patron_min(t.C_Lp + t.C_Ld) / 2.0;
  m.R = cost.per_patron_min(t.C_Rp + t.C_Rd) / 2.0;
  m.K = design.K;
  m.M = design.grid.M;
  m.N = design.grid.N;
  m.w0 = design.w0();
  const auto& g = design.grid;
  const double A = g.zone_area();
  for (const auto& zd : design.zones) {
    const double qp = mean_occupancy(p, g, zd.H_p, Direction::outbound);
    const double qd = mean_occupancy(p, g, zd.H_d, Direction::inbound);
    m.H_p += zd.H_p * 60.0;
    m.H_d += zd.H_d * 60.0;
    m.Q_p += qp;
    m.Q_d += qd;
    if (design.strategy == Strategy::fully_flexible) {
      const double kp = kstar(model, qp + 1.0, g.S());
      const double kd = kstar(model, qd + 1.0, g.S());
      m.k_p += kp;
      m.k_d += kd;
      m.tour_p += kp * std::sqrt((qp + 1.0) * A);
      m.tour_d += kd * std::sqrt((qd + 1.0) * A);
    } else {
      const double w0 = design.w0();
      const double lp = swath_tour_length(qp, A, w0) + w0 / 2.0;
      const double ld = swath_tour_length(qd, A, w0) + w0 / 2.0;
      m.tour_p += lp;
      m.tour_d += ld;
      m.k_p += lp / std::sqrt(qp * A);
      m.k_d += ld / std::sqrt(qd * A);
    }
  }
  const double n = static_cast<double>(design.zones.size());
  for (double* x : {&m.H_p, &m.H_d, &m.Q_p, &m.Q_d, &m.k_p, &m.k_d, &m.tour_p, &m.tour_d}) *x /= n;
  return m;
}

StrategyComparison compare_strategies(const ScenarioParams& p, SearchSpace space, const KStarModel& model) {
  StrategyComparison c;
  space.strategy = Strategy::fully_flexible;
  c.ff = search_design(p, space, model);
  space.strategy = Strategy::semi_flexible;
  c.sf = search_design(p, space, model);
  c.ff_metrics = table5_metrics(p, c.ff.best, c.ff.cost, model);
  c.sf_metrics = table5_metrics(p, c.sf.best, c.sf.cost, model);
  c.sf_saving_pct = (c.ff.cost.GC - c.sf.cost.GC) / c.ff.cost.GC * 100.0;
  return c;
}

}  // namespace drc
