#include "drc/params.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "drc/error.hpp"

namespace drc {
namespace {

struct Field {
  std::string_view key;
  double ScenarioParams::*member;
  bool required;
};

// tau_p and tau_d are required unless tau_0 lets them be derived.
constexpr std::array<Field, 24> kFields{{
    {"L", &ScenarioParams::L, true},
    {"W", &ScenarioParams::W, true},
    {"lambda_p", &ScenarioParams::lambda_p, true},
    {"lambda_d", &ScenarioParams::lambda_d, true},
    {"theta", &ScenarioParams::theta, true},
    {"alpha", &ScenarioParams::alpha, true},
    {"pi_v_base", &ScenarioParams::pi_v_base, true},
    {"pi_v_perK", &ScenarioParams::pi_v_perK, true},
    {"pi_m_base", &ScenarioParams::pi_m_base, true},
    {"pi_m_perK", &ScenarioParams::pi_m_perK, true},
    {"pi_m_theta_mult", &ScenarioParams::pi_m_theta_mult, true},
    {"tau_0", &ScenarioParams::tau_0, false},
    {"tau_p", &ScenarioParams::tau_p, false},
    {"tau_d", &ScenarioParams::tau_d, false},
    {"tau_a", &ScenarioParams::tau_a, true},
    {"tau_b", &ScenarioParams::tau_b, true},
    {"v_l", &ScenarioParams::v_l, true},
    {"t_ft", &ScenarioParams::t_ft, true},
    {"t_tf", &ScenarioParams::t_tf, true},
    {"H_min", &ScenarioParams::H_min, true},
    {"H_max", &ScenarioParams::H_max, true},
    {"H_t", &ScenarioParams::H_t, true},
    // lambda sets both directions at once; handled specially below.
    {"lambda", nullptr, false},
    {"preset", nullptr, false},
}};

const Field* find_field(std::string_view key) {
  for (const auto& f : kFields) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::string_view key) {
  auto one = [&](std::string_view t) {
    t = trim(t);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
      throw ConfigError("cannot parse value '" + std::string(text) + "' for key " +
                        std::string(key));
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return one(text);
  const double den = one(text.substr(slash + 1));
  if (den == 0.0) throw ConfigError("zero denominator for key " + std::string(key));
  return one(text.substr(0, slash)) / den;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

ScenarioParams table2_preset() {
  ScenarioParams p;
  p.L = 2.0;
  p.W = 2.0;
  p.lambda_p = 40.0;
  p.lambda_d = 40.0;
  p.theta = 20.0;
  p.alpha = 0.3;
  p.pi_v_base = 0.0314;
  p.pi_v_perK = 0.0039;
  p.pi_m_base = 2.068;
  p.pi_m_perK = 0.108;
  p.pi_m_theta_mult = 2.0;
  p.tau_0 = 26.0 / 3600.0;
  p.tau_p = 30.0 / 3600.0;
  p.tau_d = 28.0 / 3600.0;
  p.tau_a = 2.0 / 3600.0;
  p.tau_b = 4.0 / 3600.0;
  p.v_l = 25.0;
  p.t_ft = 3.0 / 60.0;
  p.t_tf = 3.0 / 60.0;
  p.H_min = 3.0 / 60.0;
  p.H_max = 1.0;
  p.H_t = 5.0 / 60.0;
  return p;
}

void validate(const ScenarioParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("non-positive value for ") + name);
    }
  };
  positive(p.L, "L");
  positive(p.W, "W");
  positive(p.lambda_p, "lambda_p");
  positive(p.lambda_d, "lambda_d");
  positive(p.theta, "theta");
  positive(p.tau_p, "tau_p");
  positive(p.tau_d, "tau_d");
  positive(p.tau_a, "tau_a");
  positive(p.tau_b, "tau_b");
  positive(p.v_l, "v_l");
  positive(p.t_ft, "t_ft");
  positive(p.t_tf, "t_tf");
  positive(p.H_min, "H_min");
  positive(p.H_max, "H_max");
  positive(p.H_t, "H_t");
  if (p.pi_v_base < 0 || p.pi_v_perK < 0 || p.pi_m_base < 0 || p.pi_m_perK < 0 ||
      p.pi_m_theta_mult < 0) {
    throw ConfigError("unit cost coefficients must be non-negative");
  }
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) throw ConfigError("alpha outside [0,1]");
  if (p.H_min > p.H_max) throw ConfigError("H_min exceeds H_max");
  if (p.H_t > p.H_max) throw ConfigError("H_t exceeds H_max");
  if (p.tau_0 < 0.0) throw ConfigError("non-positive value for tau_0");
  if (p.tau_0 > 0.0) {
    if (!close(p.tau_p, p.tau_0 + p.tau_b)) {
      throw ConfigError("tau consistency violated: tau_p != tau_0 + tau_b");
    }
    if (!close(p.tau_d, p.tau_0 + p.tau_a)) {
      throw ConfigError("tau consistency violated: tau_d != tau_0 + tau_a");
    }
  }
}

ScenarioParams load_scenario(std::string_view text) {
  ScenarioParams p;
  std::map<std::string, double, std::less<>> seen;
  bool preset = false;

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find_first_of("=:");
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    if (key == "preset") {
      if (value != "table2") throw ConfigError("unknown preset '" + std::string(value) + "'");
      p = table2_preset();
      preset = true;
      continue;
    }
    if (!find_field(key)) throw ConfigError("unknown key '" + std::string(key) + "'");
    seen[std::string(key)] = parse_number(value, key);
  }

  for (const auto& [key, v] : seen) set_param(p, key, v);

  if (!preset) {
    for (const auto& f : kFields) {
      if (!f.required) continue;
      if (seen.contains(f.key)) continue;
      if ((f.key == "lambda_p" || f.key == "lambda_d") && seen.contains("lambda")) continue;
      throw ConfigError("missing field " + std::string(f.key));
    }
  }
  const bool have_p = preset || seen.contains("tau_p");
  const bool have_d = preset || seen.contains("tau_d");
  if (!have_p || !have_d) {
    if (!seen.contains("tau_0")) {
      throw ConfigError(std::string("missing field ") + (have_p ? "tau_d" : "tau_p"));
    }
    if (!have_p) p.tau_p = p.tau_0 + p.tau_b;
    if (!have_d) p.tau_d = p.tau_0 + p.tau_a;
  }
  // A preset's tau_0 only constrains dwell values it also supplied.
  if (preset && !seen.contains("tau_0") &&
      (seen.contains("tau_p") || seen.contains("tau_d") || seen.contains("tau_a") ||
       seen.contains("tau_b"))) {
    p.tau_0 = 0.0;
  }
  validate(p);
  return p;
}

ScenarioParams load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string to_config_text(const ScenarioParams& p) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& f : kFields) {
    if (!f.member) continue;
    out << f.key << " = " << p.*(f.member) << '\n';
  }
  return out.str();
}

void set_param(ScenarioParams& p, std::string_view key, double value) {
  if (key == "lambda") {
    p.lambda_p = value;
    p.lambda_d = value;
    return;
  }
  const Field* f = find_field(key);
  if (!f || !f->member) throw ConfigError("unknown key '" + std::string(key) + "'");
  p.*(f->member) = value;
}

double get_param(const ScenarioParams& p, std::string_view key) {
  if (key == "lambda") return p.lambda_p;
  const Field* f = find_field(key);
  if (!f || !f->member) throw ConfigError("unknown key '" + std::string(key) + "'");
  return p.*(f->member);
}

ZoneGrid make_grid(const ScenarioParams& params, int M, int N) {
  if (M < 1 || N < 1) throw PreconditionError("zone counts must be >= 1");
  ZoneGrid g;
  g.M = M;
  g.N = N;
  g.l = params.L / N;
  g.w = params.W / M;
  return g;
}

double line_haul_distance(const ZoneGrid& grid, ZoneIndex z) {
  if (z.m < 1 || z.m > grid.M || z.n < 1 || z.n > grid.N) {
    throw PreconditionError("zone index outside grid");
  }
  return (z.m - 1) * grid.w + (z.n - 1) * grid.l;
}

}  // namespace drc
