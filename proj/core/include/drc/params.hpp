#pragma once

#include <string>
#include <string_view>

namespace drc {

/// Exogenous inputs of a feeder-service scenario. Times are in hours,
/// lengths in km, money in $, densities in patrons/h/km^2.
struct ScenarioParams {
  double L = 0.0;         // region length (x extent)
  double W = 0.0;         // region width (y extent)
  double lambda_p = 0.0;  // outbound demand density
  double lambda_d = 0.0;  // inbound demand density
  double theta = 0.0;     // value of time, $/h
  double alpha = 0.0;     // home-wait discount factor

  // pi_v = pi_v_base + pi_v_perK*K                     ($/veh-km)
  // pi_m = pi_m_base + pi_m_perK*K + pi_m_theta_mult*theta  ($/veh-h)
  double pi_v_base = 0.0;
  double pi_v_perK = 0.0;
  double pi_m_base = 0.0;
  double pi_m_perK = 0.0;
  double pi_m_theta_mult = 0.0;

  double tau_0 = 0.0;  // accel/decel loss per stop; 0 when not supplied
  double tau_p = 0.0;  // outbound dwell per stop
  double tau_d = 0.0;  // inbound dwell per stop
  double tau_a = 0.0;  // alighting time per patron at the terminal
  double tau_b = 0.0;  // boarding time per patron at the terminal
  double v_l = 0.0;    // cruise speed, km/h
  double t_ft = 0.0;   // feeder -> trunk transfer delay
  double t_tf = 0.0;   // trunk -> feeder transfer delay
  double H_min = 0.0;
  double H_max = 0.0;
  double H_t = 0.0;  // trunk headway

  double pi_v(int K) const noexcept { return pi_v_base + pi_v_perK * K; }
  double pi_m(int K) const noexcept {
    return pi_m_base + pi_m_perK * K + pi_m_theta_mult * theta;
  }
  double area() const noexcept { return L * W; }
  /// Expected patrons per hour over both directions.
  double hourly_patrons() const noexcept { return (lambda_p + lambda_d) * L * W; }

  bool operator==(const ScenarioParams&) const = default;
};

/// The reference scenario used throughout the numerical study.
ScenarioParams table2_preset();

/// Throws ConfigError when an invariant does not hold.
void validate(const ScenarioParams& params);

/// Parses a flat `key = value` document. Blank lines and `#` comments are
/// ignored; values may be written as `a/b` fractions. A `preset = table2`
/// line seeds every field, later keys override it.
ScenarioParams load_scenario(std::string_view config_text);
ScenarioParams load_scenario_file(const std::string& path);

/// Inverse of load_scenario: every key at round-trip precision.
std::string to_config_text(const ScenarioParams& params);

/// Sets one key by name, as a sweep or `--set key=value` would.
void set_param(ScenarioParams& params, std::string_view key, double value);
double get_param(const ScenarioParams& params, std::string_view key);

/// M x N partition of the region into identical l x w zones.
struct ZoneGrid {
  int M = 1;
  int N = 1;
  double l = 0.0;  // zone length, L/N
  double w = 0.0;  // zone width, W/M

  /// Orientation-normalized aspect ratio, always >= 1.
  double S() const noexcept { return l >= w ? l / w : w / l; }
  double zone_area() const noexcept { return l * w; }
  int zone_count() const noexcept { return M * N; }
};

/// (m, n) with m counted bottom-to-top and n left-to-right, both 1-based.
struct ZoneIndex {
  int m = 1;
  int n = 1;
  bool operator==(const ZoneIndex&) const = default;
};

ZoneGrid make_grid(const ScenarioParams& params, int M, int N);

/// Row-major position of a zone in per-zone vectors.
inline int flat_index(const ZoneGrid& grid, ZoneIndex z) noexcept {
  return (z.m - 1) * grid.N + (z.n - 1);
}
inline ZoneIndex zone_at(const ZoneGrid& grid, int flat) noexcept {
  return ZoneIndex{flat / grid.N + 1, flat % grid.N + 1};
}

/// Distance between the zone's terminal-side corner and the terminal.
double line_haul_distance(const ZoneGrid& grid, ZoneIndex z);

}  // namespace drc
