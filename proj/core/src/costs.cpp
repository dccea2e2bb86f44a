#include "drc/costs.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "drc/error.hpp"
#include "drc/expectations.hpp"

namespace drc {
namespace {

constexpr double kTol = 1e-9;

std::string zone_label(ZoneIndex z) {
  return "zone (" + std::to_string(z.m) + "," + std::to_string(z.n) + ")";
}

double headway(const ZoneDesign& zd, Direction d) { return d == Direction::outbound ? zd.H_p : zd.H_d; }
double dwell(const ScenarioParams& p, Direction d) { return d == Direction::outbound ? p.tau_p : p.tau_d; }

// Expected FF tour length per dispatch, (Q+1) stops: sqrt(A) E[k*(Q+1) (Q+1)^(1/2)].
double ff_expected_tour(const ScenarioParams& p, const ZoneGrid& g, double H, Direction d,
                        const KStarModel& model) {
  const OccupancyLaw law{mean_occupancy(p, g, H, d)};
  return std::sqrt(g.zone_area()) * expected_tour_factor(law, model, g.S(), 0.5);
}

double sf_fixed_path(const ZoneGrid& g, ZoneIndex z, double w0) {
  return g.zone_area() / w0 + w0 / 2.0 + line_haul_distance(g, z);
}

}  // namespace

std::string to_string(Strategy s) {
  return s == Strategy::fully_flexible ? "fully_flexible" : "semi_flexible";
}

Strategy parse_strategy(const std::string& text) {
  if (text == "ff" || text == "fully_flexible") return Strategy::fully_flexible;
  if (text == "sf" || text == "semi_flexible") return Strategy::semi_flexible;
  throw ConfigError("unknown strategy '" + text + "'");
}

CostTerms& CostTerms::operator+=(const CostTerms& o) noexcept {
  C_W += o.C_W;
  C_Tp += o.C_Tp;
  C_Td += o.C_Td;
  C_Lp += o.C_Lp;
  C_Ld += o.C_Ld;
  C_Rp += o.C_Rp;
  C_Rd += o.C_Rd;
  C_vk += o.C_vk;
  C_vh += o.C_vh;
  return *this;
}

double mean_occupancy(const ScenarioParams& p, const ZoneGrid& g, double H, Direction d) {
  const double lambda = d == Direction::outbound ? p.lambda_p : p.lambda_d;
  return lambda * H * g.zone_area();
}

bool capacity_ok(double mean, int K) {
  return mean + 2.0 * std::sqrt(mean) <= K * (1.0 + kTol);
}

double ff_local_tour_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd,
                               const KStarModel& model, Direction d) {
  const double H = headway(zd, d);
  const OccupancyLaw law{mean_occupancy(p, g, H, d)};
  const double kernel = expected_tour_factor(law, model, g.S(), 1.5) -
                        expected_tour_factor(law, model, g.S(), 0.5);
  return std::sqrt(g.zone_area()) / (2.0 * H * p.v_l) * kernel +
         dwell(p, d) / (2.0 * H) * poisson_moments(law).EQ2;
}

double ff_wait_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd,
                         const KStarModel& model) {
  const double EQ = mean_occupancy(p, g, zd.H_p, Direction::outbound);
  return p.alpha * EQ / 2.0 + p.alpha * ff_local_tour_cost_zone(p, g, zd, model, Direction::outbound);
}

double line_haul_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd, Direction d) {
  const double H = headway(zd, d);
  return line_haul_distance(g, zd.z) / (H * p.v_l) * mean_occupancy(p, g, H, d);
}

double transfer_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd, Direction d) {
  const double H = headway(zd, d);
  const auto m = poisson_moments({mean_occupancy(p, g, H, d)});
  if (d == Direction::outbound) {
    return m.EQ / H * (p.t_ft + p.H_t / 2.0) + p.tau_a / (2.0 * H) * m.EQ2;
  }
  const double gamma = zd.gamma;
  return m.EQ / H * (p.t_tf + (gamma - 1.0) * H / (2.0 * gamma)) + p.tau_b / (2.0 * H) * m.EQ2;
}

std::pair<double, double> ff_agency_cost_zone(const ScenarioParams& p, const ZoneGrid& g,
                                              const ZoneDesign& zd, const KStarModel& model, int K) {
  double dist = 0.0;
  double time = 0.0;
  for (const auto d : {Direction::outbound, Direction::inbound}) {
    const double H = headway(zd, d);
    const double path = line_haul_distance(g, zd.z) + ff_expected_tour(p, g, H, d, model);
    dist += path / H;
    time += path / (p.v_l * H) + dwell(p, d) * mean_occupancy(p, g, H, d) / H;
  }
  return {p.pi_v(K) / p.theta * dist, p.pi_m(K) / p.theta * time};
}

double sf_wait_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd, double w0) {
  const double EQ = mean_occupancy(p, g, zd.H_p, Direction::outbound);
  return p.alpha / zd.H_p * EQ * (zd.H_p / 2.0 + w0 / (3.0 * p.v_l));
}

double sf_local_tour_cost_zone(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd,
                               double w0, Direction d) {
  const double H = headway(zd, d);
  const auto m = poisson_moments({mean_occupancy(p, g, H, d)});
  const double v = p.v_l;
  return 1.0 / (2.0 * H) *
         ((g.zone_area() / (v * w0) + w0 / (2.0 * v)) * m.EQ + (w0 / (3.0 * v) + dwell(p, d)) * m.EQ2);
}

std::pair<double, double> sf_agency_cost_zone(const ScenarioParams& p, const ZoneGrid& g,
                                              const ZoneDesign& zd, double w0, int K) {
  const double fixed = sf_fixed_path(g, zd.z, w0);
  const double Qp = mean_occupancy(p, g, zd.H_p, Direction::outbound);
  const double Qd = mean_occupancy(p, g, zd.H_d, Direction::inbound);
  const double km = (1.0 / zd.H_p + 1.0 / zd.H_d) * fixed + (Qp / zd.H_p + Qd / zd.H_d) * w0 / 3.0;
  const double hours = km / p.v_l + Qp * p.tau_p / zd.H_p + Qd * p.tau_d / zd.H_d;
  return {p.pi_v(K) / p.theta * km, p.pi_m(K) / p.theta * hours};
}

CostTerms zone_cost_terms(const ScenarioParams& p, const ZoneGrid& g, const ZoneDesign& zd,
                          Strategy s, const KStarModel& model, int K, double w0) {
  CostTerms t;
  if (s == Strategy::fully_flexible) {
    t.C_W = ff_wait_cost_zone(p, g, zd, model);
    t.C_Tp = ff_local_tour_cost_zone(p, g, zd, model, Direction::outbound);
    t.C_Td = ff_local_tour_cost_zone(p, g, zd, model, Direction::inbound);
    std::tie(t.C_vk, t.C_vh) = ff_agency_cost_zone(p, g, zd, model, K);
  } else {
    t.C_W = sf_wait_cost_zone(p, g, zd, w0);
    t.C_Tp = sf_local_tour_cost_zone(p, g, zd, w0, Direction::outbound);
    t.C_Td = sf_local_tour_cost_zone(p, g, zd, w0, Direction::inbound);
    std::tie(t.C_vk, t.C_vh) = sf_agency_cost_zone(p, g, zd, w0, K);
  }
  t.C_Lp = line_haul_cost_zone(p, g, zd, Direction::outbound);
  t.C_Ld = line_haul_cost_zone(p, g, zd, Direction::inbound);
  t.C_Rp = transfer_cost_zone(p, g, zd, Direction::outbound);
  t.C_Rd = transfer_cost_zone(p, g, zd, Direction::inbound);
  return t;
}

double direction_cost_zone(const ScenarioParams& p, const ZoneGrid& g, ZoneIndex z, double H,
                           int gamma, Direction d, Strategy s, const KStarModel& model, int K,
                           double w0) {
  const bool out = d == Direction::outbound;
  ZoneDesign zd{z, H, H, gamma};
  double cost = line_haul_cost_zone(p, g, zd, d) + transfer_cost_zone(p, g, zd, d);
  const double Q = mean_occupancy(p, g, H, d);
  if (s == Strategy::fully_flexible) {
    cost += ff_local_tour_cost_zone(p, g, zd, model, d);
    if (out) cost += ff_wait_cost_zone(p, g, zd, model);
    const double path = line_haul_distance(g, z) + ff_expected_tour(p, g, H, d, model);
    cost += p.pi_v(K) / p.theta * path / H;
    cost += p.pi_m(K) / p.theta * (path / (p.v_l * H) + dwell(p, d) * Q / H);
  } else {
    cost += sf_local_tour_cost_zone(p, g, zd, w0, d);
    if (out) cost += sf_wait_cost_zone(p, g, zd, w0);
    const double km = sf_fixed_path(g, z, w0) / H + Q / H * w0 / 3.0;
    cost += p.pi_v(K) / p.theta * km;
    cost += p.pi_m(K) / p.theta * (km / p.v_l + Q * dwell(p, d) / H);
  }
  return cost;
}

void check_design(const ScenarioParams& p, const DesignSolution& design) {
  const auto& g = design.grid;
  if (static_cast<int>(design.zones.size()) != g.zone_count()) {
    throw InfeasibleError("zone count", "design",
                          std::to_string(design.zones.size()) + " zones for a " +
                              std::to_string(g.M) + "x" + std::to_string(g.N) + " grid");
  }
  if (design.K < 1) throw InfeasibleError("capacity K >= 1", "design", "");
  for (int i = 0; i < g.zone_count(); ++i) {
    const auto& zd = design.zones[i];
    const auto where = zone_label(zd.z);
    if (!(zd.z == zone_at(g, i))) throw InfeasibleError("zone ordering", where, "zones must be row-major");
    if (zd.H_p < p.H_min * (1 - kTol) || zd.H_p > p.H_max * (1 + kTol)) {
      throw InfeasibleError("outbound headway bounds", where, "H_p=" + std::to_string(zd.H_p));
    }
    if (zd.H_d < std::max(p.H_min, p.H_t) * (1 - kTol) || zd.H_d > p.H_max * (1 + kTol)) {
      throw InfeasibleError("inbound headway bounds", where, "H_d=" + std::to_string(zd.H_d));
    }
    if (zd.gamma < 1 || std::abs(zd.H_d - zd.gamma * p.H_t) > kTol * std::max(1.0, zd.H_d)) {
      throw InfeasibleError("trunk synchronization H_d = gamma*H_t", where,
                            "gamma=" + std::to_string(zd.gamma));
    }
    for (const auto d : {Direction::outbound, Direction::inbound}) {
      const double q = mean_occupancy(p, g, headway(zd, d), d);
      if (!capacity_ok(q, design.K)) {
        throw InfeasibleError(d == Direction::outbound ? "outbound capacity" : "inbound capacity", where,
                              "mean occupancy " + std::to_string(q) + " exceeds K=" +
                                  std::to_string(design.K) + " at two standard deviations");
      }
    }
  }
  if (design.strategy == Strategy::semi_flexible) {
    if (!design.swath) throw InfeasibleError("swath width", "design", "semi-flexible design without w0");
    const auto& sw = *design.swath;
    if (sw.w0 > std::min(g.l, g.w) * (1 + kTol)) {
      throw InfeasibleError("swath width <= min(l, w)", "design", "w0=" + std::to_string(sw.w0));
    }
    if (std::abs(sw.w0 * sw.n_strips - sw.cut_dimension(g.l, g.w)) > kTol * sw.cut_dimension(g.l, g.w)) {
      throw InfeasibleError("swath cut", "design", "w0 * strips does not match the zone dimension");
    }
  } else if (design.swath) {
    throw InfeasibleError("swath width", "design", "fully-flexible design carries w0");
  }
}

CostBreakdown total_generalized_cost(const ScenarioParams& p, const DesignSolution& design,
                                     const KStarModel& model) {
  check_design(p, design);
  CostBreakdown out;
  out.hourly_patrons = p.hourly_patrons();
  out.per_zone.reserve(design.zones.size());
  for (const auto& zd : design.zones) {
    out.per_zone.push_back(
        zone_cost_terms(p, design.grid, zd, design.strategy, model, design.K, design.w0()));
    out.total += out.per_zone.back();
    if (design.strategy == Strategy::fully_flexible &&
        (mean_occupancy(p, design.grid, zd.H_p, Direction::outbound) < kTaylorReliableMean ||
         mean_occupancy(p, design.grid, zd.H_d, Direction::inbound) < kTaylorReliableMean)) {
      out.taylor_warning = true;
    }
  }
  out.GC = out.total.sum();
  if (out.taylor_warning) {
    spdlog::warn("mean occupancy below {} in some zone; tour expectations may be off by more than 2%",
                 kTaylorReliableMean);
  }
  return out;
}

}  // namespace drc
