#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "drc/error.hpp"
#include "drc/experiments.hpp"
#include "drc/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::string preset;
  std::uint64_t seed = 20240917;
  std::string out = "out";
  std::string kstar_mode = "calibrated";
  std::string kstar_file;
  std::string strategy = "both";
  std::vector<std::string> sets;
  unsigned workers = 0;
  bool verbose = false;
};

struct Session {
  Globals g;
  nlohmann::json files = nlohmann::json::array();

  fs::path path(const std::string& name) {
    fs::create_directories(g.out);
    files.push_back(name);
    return fs::path(g.out) / name;
  }

  std::ofstream open(const std::string& name) {
    std::ofstream os(path(name));
    if (!os) throw drc::Error("cannot write " + (fs::path(g.out) / name).string());
    return os;
  }
};

drc::ScenarioParams load_params(const Globals& g) {
  drc::ScenarioParams p;
  if (!g.config.empty()) {
    p = drc::load_scenario_file(g.config);
  } else if (g.preset.empty() || g.preset == "table2") {
    p = drc::table2_preset();
  } else {
    throw drc::ConfigError("unknown preset '" + g.preset + "'");
  }
  for (const auto& kv : g.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw drc::ConfigError("--set expects key=value, got '" + kv + "'");
    // Reuse the config grammar so fractions like 5/60 work.
    const auto key = kv.substr(0, eq);
    const auto one = drc::load_scenario("preset = table2\n" + kv);
    drc::set_param(p, key, drc::get_param(one, key));
    // An explicit dwell or handling time detaches the values from tau_0.
    if (key == "tau_p" || key == "tau_d" || key == "tau_a" || key == "tau_b") p.tau_0 = 0.0;
  }
  drc::validate(p);
  return p;
}

drc::KStarModel load_model(const Globals& g) {
  if (g.kstar_mode == "calibrated") {
    if (g.kstar_file.empty()) return drc::KStarModel::table1();
    std::ifstream is(g.kstar_file);
    if (!is) throw drc::ConfigError("cannot read " + g.kstar_file);
    return drc::read_kstar_coefficients(is);
  }
  if (g.kstar_mode == "chakraborti") return drc::KStarModel::constant(0.93);
  if (g.kstar_mode == "daganzo115") return drc::KStarModel::constant(1.15);
  if (g.kstar_mode == "yang") return drc::KStarModel::yang();
  throw drc::ConfigError("unknown --kstar-mode '" + g.kstar_mode + "'");
}

std::vector<drc::Strategy> strategies(const Globals& g) {
  if (g.strategy == "both") return {drc::Strategy::fully_flexible, drc::Strategy::semi_flexible};
  return {drc::parse_strategy(g.strategy)};
}

std::string tag(drc::Strategy s) { return s == drc::Strategy::fully_flexible ? "ff" : "sf"; }

drc::SearchSpace space_for(const Globals& g) {
  drc::SearchSpace sp;
  sp.workers = g.workers;
  return sp;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

void write_manifest(Session& s, const std::string& command, const nlohmann::json& extra) {
  nlohmann::json m;
  m["command"] = command;
  m["seed"] = s.g.seed;
  m["kstar_mode"] = s.g.kstar_mode;
  if (!s.g.kstar_file.empty()) m["kstar_file"] = s.g.kstar_file;
  m["config"] = s.g.config.empty() ? "preset:table2" : s.g.config;
  m["overrides"] = s.g.sets;
  m["files"] = s.files;
  m["results"] = extra;
  fs::create_directories(s.g.out);
  std::ofstream(fs::path(s.g.out) / "manifest.json") << m.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demand-responsive feeder design: calibration, optimization, simulation, sweeps"};
  app.require_subcommand(1);
  app.fallthrough();
  Session s;
  auto& g = s.g;
  app.add_option("--config", g.config, "Scenario file (key = value lines)");
  app.add_option("--preset", g.preset, "Named scenario preset")->check(CLI::IsMember({"table2"}));
  app.add_option("--seed", g.seed, "Root random seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--kstar-mode", g.kstar_mode, "Tour-length law for the fully-flexible model")
      ->check(CLI::IsMember({"calibrated", "chakraborti", "daganzo115", "yang"}));
  app.add_option("--kstar-file", g.kstar_file, "Coefficients CSV used by --kstar-mode calibrated");
  app.add_option("--strategy", g.strategy, "ff, sf or both")->check(CLI::IsMember({"ff", "sf", "both"}));
  app.add_option("--set", g.sets, "Override a scenario key, key=value (repeatable)");
  app.add_option("--workers", g.workers, "Worker threads (0: all cores)");
  app.add_flag("-v,--verbose", g.verbose, "Debug logging");

  auto* cal = app.add_subcommand("calibrate", "Simulate k* over (q, S) and fit the scaling law");
  drc::CalibrationSpec cspec;
  std::string tour_mode = "closed";
  cal->add_option("--min-instances", cspec.min_instances);
  cal->add_option("--tolerance", cspec.tolerance);
  cal->add_option("--max-instances", cspec.max_instances);
  cal->add_option("--mode", tour_mode)->check(CLI::IsMember({"closed", "open"}));

  auto* opt = app.add_subcommand("optimize", "Optimal design for one or both strategies");
  auto* cmp = app.add_subcommand("compare", "Head-to-head table of both optimal designs");

  auto* val = app.add_subcommand("validate", "Monte Carlo validation of optimized designs");
  std::string grid = "single";
  drc::ValidationSpec vspec;
  std::string design_file;
  val->add_option("--grid", grid, "single (current scenario) or campaign (32 scenarios)")
      ->check(CLI::IsMember({"single", "campaign"}));
  val->add_option("--min-runs", vspec.min_runs);
  val->add_option("--max-runs", vspec.max_runs);
  val->add_option("--design", design_file, "Validate this design document instead of optimizing");

  auto* swp = app.add_subcommand("sweep", "Sensitivity sweep along one scenario axis");
  std::string axis = "lambda";
  std::string values;
  std::string name;
  swp->add_option("--axis", axis)->check(CLI::IsMember({"lambda", "region_area", "aspect_ratio", "theta", "alpha"}));
  swp->add_option("--values", values, "Comma-separated, strictly increasing")->required();
  swp->add_option("--name", name, "Output file stem (default by axis: fig6..fig10)");

  auto* crit = app.add_subcommand("critical", "Demand density where the better strategy switches");
  double lo = 2.0, hi = 60.0, width = 0.5;
  crit->add_option("--lo", lo);
  crit->add_option("--hi", hi);
  crit->add_option("--width", width);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  spdlog::set_level(g.verbose ? spdlog::level::debug : spdlog::level::info);
  try {
    if (cal->parsed()) {
      cspec.mode = tour_mode == "open" ? drc::TourMode::open_path : drc::TourMode::closed_cycle;
      const auto r = drc::calibrate_kstar(cspec, g.seed);
      {
        auto os = s.open("calibration.csv");
        drc::write_calibration_csv(os, r);
      }
      {
        auto os = s.open("tableB1.csv");
        drc::write_tableB1_csv(os, r.grid);
      }
      {
        auto os = s.open("kstar_coefficients.csv");
        drc::write_kstar_coefficients_csv(os, r.model);
      }
      {
        auto os = s.open("fig4_kstar_errors.csv");
        os << "q,S,simulated,fitted_ape_pct,table_coefficients_ape_pct,yang_ape_pct,k093_ape_pct,k115_ape_pct\n";
        const auto t1 = drc::KStarModel::table1();
        for (const auto& c : r.grid.cells) {
          auto ape = [&](double est) { return 100.0 * std::abs(est - c.mean_kstar) / c.mean_kstar; };
          os << c.q << ',' << c.S << ',' << c.mean_kstar << ',' << ape(drc::kstar(r.model, c.q, c.S)) << ','
             << ape(drc::kstar(t1, c.q, c.S)) << ','
             << ape(drc::benchmark_kstar(drc::BenchmarkKStar::yang, c.q, c.S)) << ',' << ape(0.93) << ','
             << ape(1.15) << '\n';
        }
      }
      {
        auto os = s.open("fig5_swath_gap.csv");
        drc::write_swath_gap_csv(os, drc::swath_gap_table(cspec.q_values, {1.0, 1.5, 2.0, 2.5, 3.0}));
      }
      std::cout << "fitted beta = (" << r.model.beta1 << ", " << r.model.beta2 << ", " << r.model.beta3 << ", "
                << r.model.beta4 << ", " << r.model.beta5 << "), MAPE " << r.fit_mape << "%\n";
      write_manifest(s, "calibrate", {{"fit_mape_pct", r.fit_mape}});
      return 0;
    }

    const auto params = load_params(g);
    const auto model = load_model(g);

    if (opt->parsed()) {
      nlohmann::json res;
      for (const auto st : strategies(g)) {
        auto sp = space_for(g);
        sp.strategy = st;
        const auto r = drc::search_design(params, sp, model);
        s.open("design_" + tag(st) + ".json") << drc::design_to_json(r.best, &r.cost) << '\n';
        {
          auto os = s.open("cost_breakdown_" + tag(st) + ".csv");
          drc::write_cost_breakdown_csv(os, r.best, r.cost);
        }
        {
          auto os = s.open("search_log_" + tag(st) + ".csv");
          drc::write_search_log_csv(os, r);
        }
        std::cout << drc::to_string(st) << ": " << r.best.grid.M << "x" << r.best.grid.N << " K=" << r.best.K;
        if (r.best.swath) std::cout << " w0=" << r.best.w0();
        std::cout << " GC=" << r.cost.GC_per_patron_min() << " min/patron (" << r.wall_time_s << " s)\n";
        res[tag(st)] = {{"GC_min_per_patron", r.cost.GC_per_patron_min()}, {"wall_time_s", r.wall_time_s}};
      }
      write_manifest(s, "optimize", res);
      return 0;
    }

    if (cmp->parsed()) {
      const auto c = drc::run_table5(params, space_for(g), model);
      {
        auto os = s.open("table5.csv");
        drc::write_table5_csv(os, c);
      }
      for (const auto* r : {&c.ff, &c.sf}) {
        auto os = s.open("search_log_" + tag(r->best.strategy) + ".csv");
        drc::write_search_log_csv(os, *r);
      }
      drc::write_table5_csv(std::cout, c);
      write_manifest(s, "compare", {{"sf_saving_pct", c.sf_saving_pct}});
      return 0;
    }

    if (val->parsed()) {
      vspec.workers = g.workers;
      if (!design_file.empty()) {
        std::ifstream is(design_file);
        if (!is) throw drc::ConfigError("cannot read " + design_file);
        std::stringstream buf;
        buf << is.rdbuf();
        const auto d = drc::design_from_json(buf.str());
        const auto rep = drc::run_validation(params, d, model, g.seed, vspec);
        std::cout << "runs " << rep.n_runs << ", simulated GC " << rep.gc_mean << " +- " << rep.gc_se
                  << " min/patron, analytic " << rep.analytic_gc << ", error " << rep.err_gc << "%, overcapacity "
                  << rep.overcapacity_pct << "%\n";
        drc::CampaignResult one;
        one.rows.push_back({design_file, d.strategy, d, rep});
        {
          auto os = s.open("validation_runs.csv");
          drc::write_validation_runs_csv(os, one);
        }
        write_manifest(s, "validate", {{"err_gc_pct", rep.err_gc}, {"n_runs", rep.n_runs}});
        return 0;
      }
      std::vector<drc::NamedScenario> scenarios;
      if (grid == "campaign") scenarios = drc::validation_grid(params);
      else scenarios.push_back({"scenario", params});
      const auto sts = strategies(g);
      const auto r = drc::run_validation_campaign(scenarios, sts, space_for(g), model, g.seed, vspec);
      for (const auto st : sts) {
        const auto& t = st == drc::Strategy::fully_flexible ? r.ff : r.sf;
        auto os = s.open(st == drc::Strategy::fully_flexible ? "table3.csv" : "table4.csv");
        drc::write_validation_table_csv(os, t);
        std::cout << drc::to_string(st) << '\n';
        drc::write_validation_table_csv(std::cout, t);
      }
      {
        auto os = s.open("validation_runs.csv");
        drc::write_validation_runs_csv(os, r);
      }
      write_manifest(s, "validate", {{"scenarios", scenarios.size()}});
      return 0;
    }

    if (swp->parsed()) {
      drc::SweepSpec spec;
      spec.axis = drc::parse_sweep_axis(axis);
      spec.values = parse_values(values);
      spec.base = params;
      spec.strategies = strategies(g);
      static const std::map<std::string, std::string> default_names{
          {"lambda", "fig6"}, {"region_area", "fig7"}, {"aspect_ratio", "fig8"}, {"theta", "fig9"}, {"alpha", "fig10"}};
      const auto stem = name.empty() ? default_names.at(axis) : name;
      const auto rows = drc::run_sweep(spec, space_for(g), model);
      {
        auto os = s.open(stem + ".csv");
        drc::write_sweep_csv(os, spec.axis, rows);
      }
      drc::write_sweep_csv(std::cout, spec.axis, rows);
      write_manifest(s, "sweep", {{"axis", axis}, {"points", spec.values.size()}});
      return 0;
    }

    if (crit->parsed()) {
      const double lam = drc::find_critical_density(params, space_for(g), model, lo, hi,
                                                    drc::Strategy::fully_flexible, drc::Strategy::semi_flexible,
                                                    width);
      s.open("critical.csv") << "pair,critical_lambda\nfully_flexible/semi_flexible," << lam << '\n';
      std::cout << "critical density " << lam << " patrons/h/km^2\n";
      write_manifest(s, "critical", {{"critical_lambda", lam}});
      return 0;
    }
  } catch (const drc::InfeasibleError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 1;
}
