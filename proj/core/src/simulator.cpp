#include "drc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <spdlog/spdlog.h>

#include "drc/error.hpp"
#include "drc/expectations.hpp"
#include "drc/parallel.hpp"
#include "drc/random.hpp"
#include "drc/tsp.hpp"

namespace drc {
namespace {

struct LocalRequest {
  Point at;  // zone coordinates
  double t;
};

using ZoneBuckets = std::vector<std::vector<LocalRequest>>;

ZoneBuckets bucket_by_zone(const ZoneGrid& g, const std::vector<Request>& reqs) {
  ZoneBuckets out(g.zone_count());
  for (const auto& r : reqs) {
    const int n = std::clamp(static_cast<int>(r.x / g.l), 0, g.N - 1);
    const int m = std::clamp(static_cast<int>(r.y / g.w), 0, g.M - 1);
    out[m * g.N + n].push_back({{r.x - n * g.l, r.y - m * g.w}, r.t});
  }
  return out;
}

// Window k covers ((k-1)H, kH]; t = 0 belongs to the first window.
long window_of(double t, double H) { return std::max(1L, static_cast<long>(std::ceil(t / H))); }

long full_windows(double H) { return static_cast<long>(std::floor(1.0 / H + 1e-9)); }

std::vector<std::vector<LocalRequest>> batch_windows(const std::vector<LocalRequest>& reqs, double H,
                                                     long n_full, long& served) {
  std::vector<std::vector<LocalRequest>> out(n_full);
  for (const auto& r : reqs) {
    ++served;
    const long k = window_of(r.t, H);
    if (k <= n_full) out[k - 1].push_back(r);
  }
  return out;
}

struct DirectionSums {
  double user = 0.0;   // local-tour in-vehicle time (and wait, outbound)
  double wait = 0.0;
  double line_haul = 0.0;
  double transfer = 0.0;
  double vk = 0.0;
  double vh = 0.0;
  double km = 0.0;
  double loss = 0.0;
};

// Adds one dispatch's count-linear terms shared by both strategies.
void add_shared(const ScenarioParams& p, const DesignSolution& d, const ZoneDesign& zd, Direction dir,
                double Q, double lh, double local_km, DirectionSums& s) {
  const bool out = dir == Direction::outbound;
  const double tau = out ? p.tau_p : p.tau_d;
  s.line_haul += Q * lh / p.v_l;
  if (out) {
    s.transfer += Q * (p.t_ft + p.H_t / 2.0) + p.tau_a * Q * Q / 2.0;
  } else {
    const double g = zd.gamma;
    s.transfer += Q * (p.t_tf + (g - 1.0) * zd.H_d / (2.0 * g)) + p.tau_b * Q * Q / 2.0;
  }
  s.vk += p.pi_v(d.K) / p.theta * (lh + local_km);
  s.vh += p.pi_m(d.K) / p.theta * ((lh + local_km) / p.v_l + tau * Q);
  s.km += local_km;
  s.loss += out ? tau * Q * Q : tau * Q * Q / 2.0;
}

void add_rates(const DirectionSums& s, double span, Direction dir, SimRun& run) {
  auto& t = run.terms;
  if (dir == Direction::outbound) {
    t.C_W += s.wait / span;
    t.C_Tp += s.user / span;
    t.C_Lp += s.line_haul / span;
    t.C_Rp += s.transfer / span;
    run.tour_km_p += s.km / span;
    run.pickup_loss += s.loss / span;
  } else {
    t.C_Td += s.user / span;
    t.C_Ld += s.line_haul / span;
    t.C_Rd += s.transfer / span;
    run.tour_km_d += s.km / span;
    run.dropoff_loss += s.loss / span;
  }
  t.C_vk += s.vk / span;
  t.C_vh += s.vh / span;
}

void count_dispatch(int K, long Q, Direction dir, SimRun& run) {
  ++run.dispatches;
  if (Q > K) ++run.overcapacity_events;
  if (dir == Direction::outbound) {
    ++run.dispatches_p;
    run.sum_Q_p += static_cast<double>(Q);
  }
}

// Swath coordinates: s along the unfolded serpentine, u across the strip.
struct SwathPos {
  double s;
  double u;
  double t;
};

SwathPos to_swath(const ZoneGrid& g, const SwathConfig& sw, const LocalRequest& r) {
  const bool along_l = sw.along == StripAxis::along_length;
  const double along = along_l ? r.at.x : r.at.y;
  const double across = along_l ? r.at.y : r.at.x;
  const double sl = sw.strip_length(g.l, g.w);
  const int j = std::clamp(static_cast<int>(across / sw.w0), 0, sw.n_strips - 1);
  const double s = j * sl + (j % 2 == 0 ? along : sl - along);
  return {s, across - j * sw.w0, r.t};
}

}  // namespace

DemandRealization generate_demand(const ScenarioParams& p, std::uint64_t seed) {
  auto rng = make_rng(seed, {0xde3a4dULL});
  std::uniform_real_distribution<double> ux(0.0, p.L), uy(0.0, p.W), ut(0.0, 1.0);
  DemandRealization d;
  auto fill = [&](double lambda, std::vector<Request>& out) {
    const double mean = lambda * p.area();
    const long n = mean > 0.0 ? std::poisson_distribution<long>(mean)(rng) : 0;
    out.reserve(n);
    for (long i = 0; i < n; ++i) {
      const double x = ux(rng);
      const double y = uy(rng);
      out.push_back({x, y, ut(rng)});
    }
  };
  fill(p.lambda_p, d.outbound);
  fill(p.lambda_d, d.inbound);
  return d;
}

SimRun simulate_ff_hour(const ScenarioParams& p, const DesignSolution& design, const KStarModel&,
                        const DemandRealization& demand, std::uint64_t aux_seed) {
  if (design.strategy != Strategy::fully_flexible) {
    throw PreconditionError("simulate_ff_hour needs a fully-flexible design");
  }
  const auto& g = design.grid;
  SimRun run;
  run.requests = static_cast<long>(demand.outbound.size() + demand.inbound.size());
  const auto out_b = bucket_by_zone(g, demand.outbound);
  const auto in_b = bucket_by_zone(g, demand.inbound);
  auto rng = make_rng(aux_seed, {0xa4c0ULL});
  std::uniform_real_distribution<double> ax(0.0, g.l), ay(0.0, g.w);
  std::vector<Point> pts;

  for (int zi = 0; zi < g.zone_count(); ++zi) {
    const auto& zd = design.zones[zi];
    const double lh = line_haul_distance(g, zd.z);
    for (const auto dir : {Direction::outbound, Direction::inbound}) {
      const bool out = dir == Direction::outbound;
      const double H = out ? zd.H_p : zd.H_d;
      const double tau = out ? p.tau_p : p.tau_d;
      const long n_full = full_windows(H);
      const auto windows = batch_windows(out ? out_b[zi] : in_b[zi], H, n_full, run.served);
      DirectionSums s;
      for (long k = 1; k <= n_full; ++k) {
        const auto& batch = windows[k - 1];
        const long Q = static_cast<long>(batch.size());
        count_dispatch(design.K, Q, dir, run);
        pts.assign(1, Point{ax(rng), ay(rng)});
        for (const auto& r : batch) pts.push_back(r.at);
        Tour tour;
        if (Q == 0) {
          tour.order = {0};
        } else if (static_cast<int>(pts.size()) <= kMaxExactPoints) {
          tour = exact_tour(pts, TourMode::closed_cycle);
        } else {
          tour = heuristic_tour(pts, TourMode::closed_cycle);
          run.heuristic_fallback = true;
        }
        const double tour_time = tour.length / p.v_l + Q * tau;
        double along = 0.0;
        for (std::size_t i = 1; i < tour.order.size(); ++i) {
          along += manhattan(pts[tour.order[i - 1]], pts[tour.order[i]]);
          const double reach = along / p.v_l + (static_cast<double>(i) - 0.5) * tau;
          if (out) {
            const auto& r = batch[tour.order[i] - 1];
            s.wait += p.alpha * (k * H - r.t + reach);
            s.user += tour_time - reach;
          } else {
            s.user += reach;
          }
        }
        add_shared(p, design, zd, dir, static_cast<double>(Q), lh, tour.length, s);
      }
      add_rates(s, n_full * H, dir, run);
    }
  }
  run.GC = run.terms.sum();
  return run;
}

SimRun simulate_sf_hour(const ScenarioParams& p, const DesignSolution& design, const KStarModel&,
                        const DemandRealization& demand, std::uint64_t aux_seed) {
  if (design.strategy != Strategy::semi_flexible || !design.swath) {
    throw PreconditionError("simulate_sf_hour needs a semi-flexible design with a swath");
  }
  const auto& g = design.grid;
  const auto& sw = *design.swath;
  const double w0 = sw.w0;
  const double path = g.zone_area() / w0;
  SimRun run;
  run.requests = static_cast<long>(demand.outbound.size() + demand.inbound.size());
  const auto out_b = bucket_by_zone(g, demand.outbound);
  const auto in_b = bucket_by_zone(g, demand.inbound);
  auto rng = make_rng(aux_seed, {0x5f5fULL});
  std::uniform_real_distribution<double> lateral(0.0, w0);

  for (int zi = 0; zi < g.zone_count(); ++zi) {
    const auto& zd = design.zones[zi];
    const double lh = line_haul_distance(g, zd.z);
    for (const auto dir : {Direction::outbound, Direction::inbound}) {
      const bool out = dir == Direction::outbound;
      const double H = out ? zd.H_p : zd.H_d;
      const double tau = out ? p.tau_p : p.tau_d;
      // Outbound bus k leaves at kH and passes s at kH + s/v; its batch is
      // full when k >= 1 and the sweep ends within the hour.
      const long n_full = out ? static_cast<long>(std::floor((1.0 - path / p.v_l) / H + 1e-9))
                              : full_windows(H);
      if (n_full < 1) {
        throw PreconditionError("headway and sweep time leave no complete dispatch within the hour");
      }
      std::vector<std::vector<SwathPos>> buses(n_full);
      for (const auto& r : out ? out_b[zi] : in_b[zi]) {
        ++run.served;
        const SwathPos sp = to_swath(g, sw, r);
        const long k = out ? std::max(0L, static_cast<long>(std::ceil((sp.t - sp.s / p.v_l) / H)))
                           : window_of(sp.t, H);
        if (k >= 1 && k <= n_full) buses[k - 1].push_back(sp);
      }
      DirectionSums s;
      for (long k = 1; k <= n_full; ++k) {
        auto& batch = buses[k - 1];
        std::sort(batch.begin(), batch.end(), [](const SwathPos& a, const SwathPos& b) { return a.s < b.s; });
        const long Q = static_cast<long>(batch.size());
        count_dispatch(design.K, Q, dir, run);
        double u = lateral(rng);
        double lat = 0.0;
        std::vector<double> reach(Q);
        for (long i = 0; i < Q; ++i) {
          const double hop = std::abs(batch[i].u - u);
          u = batch[i].u;
          lat += hop;
          reach[i] = (batch[i].s + lat) / p.v_l + (i + 0.5) * tau;
          if (out) s.wait += p.alpha * (k * H + batch[i].s / p.v_l - batch[i].t + hop / p.v_l);
        }
        const double local_km = path + lat + w0 / 2.0;
        const double end = local_km / p.v_l + Q * tau;
        for (long i = 0; i < Q; ++i) s.user += out ? end - reach[i] : reach[i];
        add_shared(p, design, zd, dir, static_cast<double>(Q), lh, local_km, s);
      }
      add_rates(s, n_full * H, dir, run);
    }
  }
  run.GC = run.terms.sum();
  return run;
}

AnalyticRates analytic_rates(const ScenarioParams& p, const DesignSolution& design, const KStarModel& model) {
  AnalyticRates a;
  a.GC = total_generalized_cost(p, design, model).GC;
  const auto& g = design.grid;
  const double A = g.zone_area();
  for (const auto& zd : design.zones) {
    const auto mp = poisson_moments({mean_occupancy(p, g, zd.H_p, Direction::outbound)});
    const auto md = poisson_moments({mean_occupancy(p, g, zd.H_d, Direction::inbound)});
    if (design.strategy == Strategy::fully_flexible) {
      a.tour_km_p += std::sqrt(A) * expected_tour_factor({mp.EQ}, model, g.S(), 0.5) / zd.H_p;
      a.tour_km_d += std::sqrt(A) * expected_tour_factor({md.EQ}, model, g.S(), 0.5) / zd.H_d;
    } else {
      const double w0 = design.w0();
      a.tour_km_p += (swath_tour_length(mp.EQ, A, w0) + w0 / 2.0) / zd.H_p;
      a.tour_km_d += (swath_tour_length(md.EQ, A, w0) + w0 / 2.0) / zd.H_d;
    }
    a.pickup_loss += p.tau_p * mp.EQ2 / zd.H_p;
    a.dropoff_loss += p.tau_d * md.EQ2 / (2.0 * zd.H_d);
  }
  return a;
}

ValidationReport run_validation(const ScenarioParams& p, const DesignSolution& design,
                                const KStarModel& model, std::uint64_t seed, const ValidationSpec& spec) {
  check_design(p, design);
  const auto analytic = analytic_rates(p, design, model);
  const double to_min = 60.0 / p.hourly_patrons();
  const bool ff = design.strategy == Strategy::fully_flexible;

  ValidationReport rep;
  double mean = 0.0, m2 = 0.0;
  double km_p = 0.0, km_d = 0.0, pick = 0.0, drop = 0.0, sum_Qp = 0.0;
  long events = 0, dispatches = 0, dispatches_p = 0;
  std::vector<SimRun> runs;
  long n = 0;
  for (;;) {
    const long batch = std::min(spec.batch, spec.max_runs - n);
    runs.assign(batch, SimRun{});
    parallel_for(
        static_cast<std::size_t>(batch),
        [&](std::size_t i) {
          const auto r = static_cast<std::uint64_t>(n + static_cast<long>(i));
          const auto demand = generate_demand(p, derive_seed(seed, {r, 1}));
          const auto aux = derive_seed(seed, {r, 2});
          runs[i] = ff ? simulate_ff_hour(p, design, model, demand, aux)
                       : simulate_sf_hour(p, design, model, demand, aux);
        },
        spec.workers ? spec.workers : default_workers());
    for (const auto& r : runs) {
      ++n;
      const double x = r.GC * to_min;
      const double delta = x - mean;
      mean += delta / n;
      m2 += delta * (x - mean);
      km_p += r.tour_km_p;
      km_d += r.tour_km_d;
      pick += r.pickup_loss;
      drop += r.dropoff_loss;
      events += r.overcapacity_events;
      dispatches += r.dispatches;
      dispatches_p += r.dispatches_p;
      sum_Qp += r.sum_Q_p;
      rep.heuristic_fallback = rep.heuristic_fallback || r.heuristic_fallback;
    }
    const double sd = n > 1 ? std::sqrt(m2 / (n - 1)) : 0.0;
    const double se = sd / std::sqrt(static_cast<double>(n));
    if (n >= spec.min_runs && se < spec.se_threshold) {
      rep.converged = true;
      rep.gc_std = sd;
      rep.gc_se = se;
      break;
    }
    if (n >= spec.max_runs) {
      throw ConvergenceError("validation did not converge after " + std::to_string(n) +
                             " runs: GC standard error " + std::to_string(se) + " min/patron");
    }
  }
  const auto pct = [](double a, double s) { return s != 0.0 ? std::abs(a - s) / std::abs(s) * 100.0 : 0.0; };
  const double dn = static_cast<double>(n);
  rep.n_runs = n;
  rep.gc_mean = mean;
  rep.analytic_gc = analytic.GC * to_min;
  rep.err_gc = pct(rep.analytic_gc, mean);
  rep.err_tour_p = pct(analytic.tour_km_p, km_p / dn);
  rep.err_tour_d = pct(analytic.tour_km_d, km_d / dn);
  rep.err_pickup = pct(analytic.pickup_loss, pick / dn);
  rep.err_dropoff = pct(analytic.dropoff_loss, drop / dn);
  rep.overcapacity_pct = dispatches ? 100.0 * events / dispatches : 0.0;
  rep.mean_Q_p = dispatches_p ? sum_Qp / dispatches_p : 0.0;
  if (rep.heuristic_fallback) spdlog::warn("some dispatch exceeded the exact tour solver; heuristic tours used");
  return rep;
}

}  // namespace drc
