#include "drc/report.hpp"

#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "drc/error.hpp"

namespace drc {
namespace {

using nlohmann::json;

struct Precise {
  explicit Precise(std::ostream& os) : os_(os), flags_(os.flags()), prec_(os.precision()) {
    os_ << std::setprecision(std::numeric_limits<double>::max_digits10);
  }
  ~Precise() {
    os_.flags(flags_);
    os_.precision(prec_);
  }
  std::ostream& os_;
  std::ios::fmtflags flags_;
  std::streamsize prec_;
};

void term_rows(std::ostream& os, const std::string& m, const std::string& n, const CostTerms& t) {
  const std::pair<const char*, double> items[] = {
      {"C_W", t.C_W},   {"C_Tp", t.C_Tp}, {"C_Td", t.C_Td}, {"C_Lp", t.C_Lp}, {"C_Ld", t.C_Ld},
      {"C_Rp", t.C_Rp}, {"C_Rd", t.C_Rd}, {"C_vk", t.C_vk}, {"C_vh", t.C_vh}};
  for (const auto& [name, v] : items) os << m << ',' << n << ',' << name << ',' << v << '\n';
}

std::string zoning(const Table5Metrics& m) { return std::to_string(m.M) + "x" + std::to_string(m.N); }

}  // namespace

void write_calibration_csv(std::ostream& os, const CalibrationResult& r) {
  Precise guard(os);
  os << "q,S,mean_kstar,std_kstar,n_instances,last_batch_change\n";
  for (const auto& c : r.grid.cells) {
    os << c.q << ',' << c.S << ',' << c.mean_kstar << ',' << c.std_kstar << ',' << c.n_instances << ','
       << c.last_batch_change << '\n';
  }
  os << "# beta1=" << r.model.beta1 << "\n# beta2=" << r.model.beta2 << "\n# beta3=" << r.model.beta3
     << "\n# beta4=" << r.model.beta4 << "\n# beta5=" << r.model.beta5 << "\n# fit_mape_pct=" << r.fit_mape
     << "\n# tour_mode=" << (r.grid.spec.mode == TourMode::closed_cycle ? "closed_cycle" : "open_path") << '\n';
}

void write_tableB1_csv(std::ostream& os, const CalibrationGrid& grid) {
  os << std::fixed << std::setprecision(2);
  os << "q";
  for (const double S : grid.spec.S_values) os << ",S=" << S;
  os << '\n';
  for (const int q : grid.spec.q_values) {
    os << q;
    for (const double S : grid.spec.S_values) os << ',' << grid.at(q, S).mean_kstar;
    os << '\n';
  }
  os.unsetf(std::ios::fixed);
}

void write_kstar_coefficients_csv(std::ostream& os, const KStarModel& m) {
  Precise guard(os);
  os << "coefficient,value\nbeta1," << m.beta1 << "\nbeta2," << m.beta2 << "\nbeta3," << m.beta3 << "\nbeta4,"
     << m.beta4 << "\nbeta5," << m.beta5 << '\n';
}

KStarModel read_kstar_coefficients(std::istream& is) {
  std::map<std::string, double> found;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '#') line = line.substr(1);
    for (char& ch : line) {
      if (ch == '=') ch = ',';
    }
    std::istringstream ss(line);
    std::string key, value;
    if (!std::getline(ss, key, ',') || !std::getline(ss, value)) continue;
    key.erase(0, key.find_first_not_of(' '));
    if (key.rfind("beta", 0) != 0 || key.size() != 5) continue;
    try {
      found[key] = std::stod(value);
    } catch (const std::exception&) {
      throw ConfigError("bad coefficient value for " + key + ": '" + value + "'");
    }
  }
  KStarModel m;
  double* slots[] = {&m.beta1, &m.beta2, &m.beta3, &m.beta4, &m.beta5};
  for (int i = 0; i < 5; ++i) {
    const auto it = found.find("beta" + std::to_string(i + 1));
    if (it == found.end()) throw ConfigError("coefficient beta" + std::to_string(i + 1) + " missing");
    *slots[i] = it->second;
  }
  return m;
}

void write_swath_gap_csv(std::ostream& os, const std::vector<SwathGapRow>& rows) {
  Precise guard(os);
  os << "q,S,best_w0,constrained_km,unconstrained_km,gap_pct\n";
  for (const auto& r : rows) {
    os << r.q << ',' << r.S << ',' << r.best_w0 << ',' << r.constrained << ',' << r.unconstrained << ','
       << r.gap_pct << '\n';
  }
}

void write_cost_breakdown_csv(std::ostream& os, const DesignSolution& d, const CostBreakdown& c) {
  Precise guard(os);
  os << "m,n,component,hourly_cost_h\n";
  for (std::size_t i = 0; i < c.per_zone.size(); ++i) {
    const auto z = zone_at(d.grid, static_cast<int>(i));
    term_rows(os, std::to_string(z.m), std::to_string(z.n), c.per_zone[i]);
  }
  term_rows(os, "all", "all", c.total);
  os << "all,all,GC," << c.GC << '\n';
  os << "all,all,GC_min_per_patron," << c.GC_per_patron_min() << '\n';
}

void write_search_log_csv(std::ostream& os, const OptimizationResult& r) {
  Precise guard(os);
  os << "M,N,K,w0,feasible,GC,GC_min_per_patron,taylor_warning,note\n";
  for (const auto& e : r.log) {
    os << e.M << ',' << e.N << ',' << e.K << ',' << e.w0 << ',' << (e.feasible ? 1 : 0) << ',';
    if (e.feasible) os << e.GC << ',' << e.GC_per_patron_min;
    else os << ',';
    os << ',' << (e.taylor_warning ? 1 : 0) << ",\"" << e.note << "\"\n";
  }
}

void write_table5_csv(std::ostream& os, const StrategyComparison& c) {
  const auto& f = c.ff_metrics;
  const auto& s = c.sf_metrics;
  os << std::fixed << std::setprecision(2);
  os << "row,metric,fully_flexible,semi_flexible\n";
  os << "1,mean total cost (min/patron)," << f.GC << ',' << s.GC << '\n';
  os << "2,mean user cost (min/patron)," << f.UC << ',' << s.UC << '\n';
  os << "3,mean agency cost (min/patron)," << f.AC << ',' << s.AC << '\n';
  os << "4,mean waiting time at home (min/patron)," << f.W << ',' << s.W << '\n';
  os << "5,mean local-tour in-vehicle time (min/patron)," << f.T << ',' << s.T << '\n';
  os << "6,mean line-haul travel time (min/patron)," << f.L << ',' << s.L << '\n';
  os << "7,mean transfer time (min/patron)," << f.R << ',' << s.R << '\n';
  os << "8,bus capacity (patrons/bus)," << f.K << ',' << s.K << '\n';
  os << "9,service zones MxN," << zoning(f) << ',' << zoning(s) << '\n';
  os << "10,swath width (km),-," << s.w0 << '\n';
  os << "11,mean outbound headway per zone (min)," << f.H_p << ',' << s.H_p << '\n';
  os << "12,mean inbound headway per zone (min)," << f.H_d << ',' << s.H_d << '\n';
  os << "13,mean outbound occupancy (patrons/bus)," << f.Q_p << ',' << s.Q_p << '\n';
  os << "14,mean inbound occupancy (patrons/bus)," << f.Q_d << ',' << s.Q_d << '\n';
  os << "15,mean outbound k*," << f.k_p << ',' << s.k_p << '\n';
  os << "16,mean inbound k*," << f.k_d << ',' << s.k_d << '\n';
  os << "17,mean outbound tour length (km)," << f.tour_p << ',' << s.tour_p << '\n';
  os << "18,mean inbound tour length (km)," << f.tour_d << ',' << s.tour_d << '\n';
  os << "-,semi-flexible saving (%)," << c.sf_saving_pct << ",\n";
  os.unsetf(std::ios::fixed);
}

void write_validation_table_csv(std::ostream& os, const CampaignTable& t) {
  os << std::fixed << std::setprecision(2);
  os << "metric,Average,Maximum\n";
  const std::pair<const char*, const ErrorSummary*> rows[] = {
      {"Errors in GC", &t.gc},
      {"Errors in outbound tour length", &t.tour_p},
      {"Errors in inbound tour length", &t.tour_d},
      {"Errors in cumulative pick-up time loss", &t.pickup},
      {"Errors in cumulative drop-off time loss", &t.dropoff},
      {"Overcapacity", &t.overcapacity}};
  for (const auto& [label, e] : rows) os << label << ',' << e->avg << "%," << e->max << "%\n";
  os.unsetf(std::ios::fixed);
}

void write_validation_runs_csv(std::ostream& os, const CampaignResult& r) {
  Precise guard(os);
  os << "scenario,strategy,M,N,K,w0,n_runs,sim_gc_min,analytic_gc_min,gc_se,err_gc_pct,err_tour_p_pct,"
        "err_tour_d_pct,err_pickup_pct,err_dropoff_pct,overcapacity_pct,heuristic_fallback\n";
  for (const auto& row : r.rows) {
    const auto& v = row.report;
    os << '"' << row.scenario << "\"," << to_string(row.strategy) << ',' << row.design.grid.M << ','
       << row.design.grid.N << ',' << row.design.K << ',' << row.design.w0() << ',' << v.n_runs << ','
       << v.gc_mean << ',' << v.analytic_gc << ',' << v.gc_se << ',' << v.err_gc << ',' << v.err_tour_p << ','
       << v.err_tour_d << ',' << v.err_pickup << ',' << v.err_dropoff << ',' << v.overcapacity_pct << ','
       << (v.heuristic_fallback ? 1 : 0) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<SweepRow>& rows) {
  Precise guard(os);
  os << to_string(axis)
     << ",strategy,feasible,GC_min_per_patron,UC,AC,M,N,zone_aspect_l_over_w,K,w0,H_p_min,H_d_min,Q_p,Q_d,note\n";
  for (const auto& r : rows) {
    os << r.value << ',' << to_string(r.strategy) << ',' << (r.feasible ? 1 : 0) << ',';
    if (r.feasible) {
      const auto& m = r.metrics;
      os << m.GC << ',' << m.UC << ',' << m.AC << ',' << m.M << ',' << m.N << ',' << r.aspect << ',' << m.K << ','
         << m.w0 << ',' << m.H_p << ',' << m.H_d << ',' << m.Q_p << ',' << m.Q_d << ',';
    } else {
      os << ",,,,,,,,,,,,";
    }
    os << '"' << r.note << "\"\n";
  }
}

std::string design_to_json(const DesignSolution& d, const CostBreakdown* cost, int indent) {
  json j;
  j["strategy"] = to_string(d.strategy);
  j["M"] = d.grid.M;
  j["N"] = d.grid.N;
  j["l"] = d.grid.l;
  j["w"] = d.grid.w;
  j["K"] = d.K;
  if (d.swath) {
    j["swath"] = {{"w0", d.swath->w0},
                  {"n_strips", d.swath->n_strips},
                  {"along", d.swath->along == StripAxis::along_length ? "length" : "width"}};
  }
  j["zones"] = json::array();
  for (const auto& z : d.zones) {
    j["zones"].push_back({{"m", z.z.m}, {"n", z.z.n}, {"H_p", z.H_p}, {"H_d", z.H_d}, {"gamma", z.gamma}});
  }
  if (cost) {
    j["GC_h_per_h"] = cost->GC;
    j["GC_min_per_patron"] = cost->GC_per_patron_min();
    j["taylor_warning"] = cost->taylor_warning;
  }
  return j.dump(indent);
}

DesignSolution design_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    DesignSolution d;
    d.strategy = parse_strategy(j.at("strategy").get<std::string>());
    d.grid.M = j.at("M").get<int>();
    d.grid.N = j.at("N").get<int>();
    d.grid.l = j.at("l").get<double>();
    d.grid.w = j.at("w").get<double>();
    d.K = j.at("K").get<int>();
    if (j.contains("swath")) {
      const auto& s = j.at("swath");
      d.swath = SwathConfig{s.at("w0").get<double>(), s.at("n_strips").get<int>(),
                            s.at("along").get<std::string>() == "length" ? StripAxis::along_length
                                                                         : StripAxis::along_width};
    }
    for (const auto& z : j.at("zones")) {
      d.zones.push_back({{z.at("m").get<int>(), z.at("n").get<int>()},
                         z.at("H_p").get<double>(),
                         z.at("H_d").get<double>(),
                         z.at("gamma").get<int>()});
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad design document: ") + e.what());
  }
}

}  // namespace drc
