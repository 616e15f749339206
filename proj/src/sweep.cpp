#include "unruh/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>
#include <omp.h>

#include "unruh/errors.hpp"

namespace unruh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = 3.14159265358979323846;

void check_axis(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw std::invalid_argument(std::string(name) + " grid must be positive and finite");
    }
    if (i > 0 && !(v[i] > v[i - 1])) {
      throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
    }
  }
}

CellConfig point_config(const SweepGrid& grid, std::size_t i, std::size_t j) {
  CellConfig c;
  c.a0 = grid.a0_values[i];
  c.omega0 = grid.omega0_values[j];
  c.lambda0 = grid.lambda0;
  c.n_modes = grid.n_modes;
  c.integrator = grid.integrator;
  return c;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json point_json(const PointResult& p) {
  nlohmann::json j;
  j["a0"] = p.a0;
  j["omega0"] = p.omega0;
  j["lambda0"] = p.lambda0;
  j["n_modes"] = p.n_modes;
  j["error_code"] = p.error_code;
  if (!p.error_message.empty()) j["error_message"] = p.error_message;
  j["sigma_infinity"] = {{json_number(p.sigma_infinity(0, 0)), json_number(p.sigma_infinity(0, 1))},
                         {json_number(p.sigma_infinity(1, 0)), json_number(p.sigma_infinity(1, 1))}};
  j["standard_form"] = {{"nu", json_number(p.standard_form.nu)},
                        {"r", json_number(p.standard_form.r)},
                        {"theta", json_number(p.standard_form.theta)}};
  const ThermalityReport& t = p.thermality;
  j["thermality"] = {{"T0", json_number(t.t0)},         {"delta", json_number(t.delta)},
                     {"epsilon", json_number(t.epsilon)}, {"p0", json_number(t.p0)},
                     {"p1", json_number(t.p1)},         {"p2", json_number(t.p2)},
                     {"t_edr_01", json_number(t.t_edr_01)}, {"t_edr_02", json_number(t.t_edr_02)},
                     {"t_edr_12", json_number(t.t_edr_12)}};
  j["dT0_da0"] = json_number(p.dT0_da0);
  j["diagnostics"] = {{"theta_phase", json_number(p.diagnostics.theta_phase)},
                      {"m_ratio", json_number(p.diagnostics.m_ratio)},
                      {"r_sweep", json_number(p.diagnostics.r_sweep)},
                      {"spectral_gap", json_number(p.diagnostics.spectral_gap)}};
  j["symplectic_defect"] = json_number(p.symplectic_defect);
  return j;
}

}  // namespace

PointResult run_point(const CellConfig& config, const PointOptions& options) {
  PointResult out;
  out.a0 = config.a0;
  out.omega0 = config.omega0;
  out.lambda0 = config.lambda0;
  out.n_modes = config.n_modes;
  out.standard_form = {kNaN, kNaN, kNaN};
  out.thermality = {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
  out.diagnostics = {kNaN, kNaN, kNaN, kNaN};
  try {
    validate(config);
    const CellKinematics kin = cell_kinematics(config.a0);
    out.diagnostics.theta_phase = kin.theta(config.omega0);
    out.diagnostics.m_ratio = kin.m_ratio;
    out.diagnostics.r_sweep = kin.r_sweep(config.omega0);

    GaussianChannel channel;
    if (options.check_symplectic) {
      const CheckedCellChannel checked = cell_channel_checked(config);
      channel = checked.channel;
      out.symplectic_defect = std::max(checked.symplectic_defect_1, checked.symplectic_defect_2);
    } else {
      channel = cell_channel(config);
    }
    out.diagnostics.spectral_gap = spectral_gap(channel);
    out.sigma_infinity = fixed_point(channel);
    out.standard_form = standard_form(out.sigma_infinity);
    out.thermality = thermality(out.standard_form, config.omega0);
  } catch (const Error& e) {
    out.error_code = std::string(e.code());
    out.error_message = e.what();
  } catch (const std::invalid_argument& e) {
    out.error_code = "InvalidArgument";
    out.error_message = e.what();
  } catch (const std::exception& e) {
    out.error_code = "InternalError";
    out.error_message = e.what();
  }
  return out;
}

std::vector<double> log_space(double min, double max, int count) {
  if (!(min > 0.0) || !(max >= min)) throw std::invalid_argument("log_space needs 0 < min <= max");
  if (count < 1) throw std::invalid_argument("log_space needs count >= 1");
  std::vector<double> v(static_cast<std::size_t>(count));
  if (count == 1) {
    v[0] = min;
    return v;
  }
  const double lo = std::log(min);
  const double hi = std::log(max);
  for (int i = 0; i < count; ++i) v[i] = std::exp(lo + (hi - lo) * i / (count - 1));
  v.front() = min;
  v.back() = max;
  return v;
}

SweepGrid default_sweep_grid() {
  SweepGrid g;
  g.a0_values = log_space(1e-2, 1e2, 40);
  g.omega0_values = log_space(kPi / 32.0, 4.0 * kPi, 40);
  g.lambda0 = 0.01;
  g.n_modes = 20;
  return g;
}

void validate(const SweepGrid& grid) {
  check_axis(grid.a0_values, "a0");
  check_axis(grid.omega0_values, "omega0");
  CellConfig probe = point_config(grid, 0, 0);
  validate(probe);
}

SweepTable run_sweep(const SweepGrid& grid, int workers) {
  validate(grid);
  SweepTable table;
  table.grid = grid;
  const std::size_t n_omega = grid.omega0_values.size();
  const long total = static_cast<long>(grid.a0_values.size() * n_omega);
  table.points.resize(static_cast<std::size_t>(total));
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long k = 0; k < total; ++k) {
    const std::size_t i = static_cast<std::size_t>(k) / n_omega;
    const std::size_t j = static_cast<std::size_t>(k) % n_omega;
    table.points[static_cast<std::size_t>(k)] = run_point(point_config(grid, i, j), grid.options);
  }
  return table;
}

SweepTable run_sweep_serial(const SweepGrid& grid) {
  validate(grid);
  SweepTable table;
  table.grid = grid;
  table.points.reserve(grid.a0_values.size() * grid.omega0_values.size());
  for (std::size_t i = 0; i < grid.a0_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.omega0_values.size(); ++j) {
      table.points.push_back(run_point(point_config(grid, i, j), grid.options));
    }
  }
  return table;
}

std::vector<double> log_derivative(const std::vector<double>& a0, const std::vector<double>& f) {
  if (a0.size() != f.size()) throw std::invalid_argument("a0 and samples differ in length");
  if (a0.size() < 3) throw std::invalid_argument("need at least three a0 values to differentiate");
  check_axis(a0, "a0");
  const std::size_t n = a0.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::log(a0[i]);
  std::vector<double> d(n);
  d[0] = (f[1] - f[0]) / (u[1] - u[0]);
  d[n - 1] = (f[n - 1] - f[n - 2]) / (u[n - 1] - u[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = u[i] - u[i - 1];
    const double hp = u[i + 1] - u[i];
    d[i] = (hm * hm * (f[i + 1] - f[i]) + hp * hp * (f[i] - f[i - 1])) / (hm * hp * (hm + hp));
  }
  for (std::size_t i = 0; i < n; ++i) d[i] /= a0[i];
  return d;
}

void temperature_slope(SweepTable& table) {
  const auto& a0 = table.grid.a0_values;
  if (a0.size() < 3) throw std::invalid_argument("need at least three a0 values to differentiate");
  std::vector<double> t0(a0.size());
  for (std::size_t j = 0; j < table.grid.omega0_values.size(); ++j) {
    for (std::size_t i = 0; i < a0.size(); ++i) t0[i] = table.at(i, j).thermality.t0;
    const std::vector<double> d = log_derivative(a0, t0);
    for (std::size_t i = 0; i < a0.size(); ++i) table.at(i, j).dT0_da0 = d[i];
  }
}

std::vector<DiagnosticCurve> diagnostic_curves(double a0_min, double a0_max, double omega0_min,
                                               double omega0_max, int samples) {
  if (!(a0_min > 0.0) || !(a0_max > a0_min) || !(omega0_min > 0.0) ||
      !(omega0_max > omega0_min) || samples < 2) {
    throw std::invalid_argument("diagnostic box must be positive and non-degenerate");
  }
  const std::vector<double> a = log_space(a0_min, a0_max, samples);
  std::vector<DiagnosticCurve> curves;

  // Theta = omega0 tau_max grows with a0, so the lowest crossing is at a0_min.
  const double tau_at_min = cell_kinematics(a0_min).tau_max;
  for (int n = 1; n * kPi / (2.0 * tau_at_min) <= omega0_max; ++n) {
    DiagnosticCurve c{"theta", static_cast<double>(n), {}, {}};
    for (double x : a) {
      const double w = n * kPi / (2.0 * cell_kinematics(x).tau_max);
      if (w >= omega0_min && w <= omega0_max) {
        c.a0.push_back(x);
        c.omega0.push_back(w);
      }
    }
    if (!c.a0.empty()) curves.push_back(std::move(c));
  }

  for (int m = 3;; ++m) {
    const double x = 2.0 / (static_cast<double>(m) * m - 1.0);
    if (x < a0_min) break;
    if (x > a0_max) continue;
    curves.push_back({"m", static_cast<double>(m), {x, x}, {omega0_min, omega0_max}});
  }

  for (int r = 1; r <= 3; ++r) {
    DiagnosticCurve c{"r", static_cast<double>(r), {}, {}};
    for (double x : a) {
      const double w = r * kPi / x;
      if (w >= omega0_min && w <= omega0_max) {
        c.a0.push_back(x);
        c.omega0.push_back(w);
      }
    }
    if (!c.a0.empty()) curves.push_back(std::move(c));
  }
  return curves;
}

ModeConvergence mode_convergence(const std::vector<double>& a0_values, double omega0,
                                 double lambda0, const std::vector<int>& n_list,
                                 const IntegratorControls& integrator, int workers) {
  if (n_list.empty()) throw std::invalid_argument("mode list is empty");
  for (std::size_t k = 1; k < n_list.size(); ++k) {
    if (!(n_list[k] > n_list[k - 1])) throw std::invalid_argument("mode list must be ascending");
  }
  ModeConvergence out;
  out.a0_values = a0_values;
  out.omega0 = omega0;
  out.lambda0 = lambda0;
  for (int n : n_list) {
    SweepGrid g;
    g.a0_values = a0_values;
    g.omega0_values = {omega0};
    g.lambda0 = lambda0;
    g.n_modes = n;
    g.integrator = integrator;
    const SweepTable t = run_sweep(g, workers);
    ModeConvergenceCurve c;
    c.n_modes = n;
    for (const PointResult& p : t.points) c.t0.push_back(p.thermality.t0);
    c.slope = a0_values.size() >= 3 ? log_derivative(a0_values, c.t0)
                                     : std::vector<double>(a0_values.size(), kNaN);
    out.curves.push_back(std::move(c));
  }
  const ModeConvergenceCurve& ref = out.curves.back();
  for (ModeConvergenceCurve& c : out.curves) {
    c.slope_split_a0 = kNaN;
    for (std::size_t i = 0; i < a0_values.size(); ++i) {
      const double dev = std::abs(c.slope[i] - ref.slope[i]) / std::abs(ref.slope[i]);
      if (!(dev <= 0.01)) {
        c.slope_split_a0 = a0_values[i];
        break;
      }
    }
    c.t0_agrees_up_to = kNaN;
    for (std::size_t i = 0; i < a0_values.size(); ++i) {
      const double dev = std::abs(c.t0[i] - ref.t0[i]) / std::abs(ref.t0[i]);
      if (!(dev <= 0.01)) break;
      c.t0_agrees_up_to = a0_values[i];
    }
  }
  return out;
}

PhysicalUnits physical_units(double length_m, double a0, double omega0) {
  if (!(length_m > 0.0)) throw std::invalid_argument("cavity length must be positive");
  PhysicalUnits u{};
  u.length_m = length_m;
  u.acceleration_m_s2 = a0 * kSpeedOfLight * kSpeedOfLight / length_m;
  u.acceleration_g = u.acceleration_m_s2 / kStandardGravity;
  u.omega_rad_s = omega0 * kSpeedOfLight / length_m;
  u.temperature_scale_K = kHbar * kSpeedOfLight / (kBoltzmann * length_m);
  return u;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "a0",       "omega0",   "lambda0",     "n_modes", "nu",      "r",
      "theta",    "T0",       "dT0_da0",     "delta",   "epsilon", "p0",
      "p1",       "p2",       "t_edr_01",    "t_edr_02", "t_edr_12", "theta_phase",
      "m_ratio",  "r_sweep",  "spectral_gap", "error_code"};
  return cols;
}

void write_csv(std::ostream& out, const SweepTable& table) {
  out << "# unruh-sweep csv schema v1\n";
  const auto& cols = csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << '\n';
  for (const PointResult& p : table.points) {
    const ThermalityReport& t = p.thermality;
    const double values[] = {p.a0,
                             p.omega0,
                             p.lambda0,
                             static_cast<double>(p.n_modes),
                             p.standard_form.nu,
                             p.standard_form.r,
                             p.standard_form.theta,
                             t.t0,
                             p.dT0_da0,
                             t.delta,
                             t.epsilon,
                             t.p0,
                             t.p1,
                             t.p2,
                             t.t_edr_01,
                             t.t_edr_02,
                             t.t_edr_12,
                             p.diagnostics.theta_phase,
                             p.diagnostics.m_ratio,
                             p.diagnostics.r_sweep,
                             p.diagnostics.spectral_gap};
    for (std::size_t k = 0; k < std::size(values); ++k) {
      if (k == 3) {
        out << ',' << p.n_modes;
        continue;
      }
      out << (k ? "," : "") << fmt(values[k]);
    }
    out << ',' << p.error_code << '\n';
  }
}

void write_json(std::ostream& out, const SweepTable& table) {
  nlohmann::json j;
  j["schema"] = "unruh-sweep json v1";
  j["a0_values"] = table.grid.a0_values;
  j["omega0_values"] = table.grid.omega0_values;
  j["lambda0"] = table.grid.lambda0;
  j["n_modes"] = table.grid.n_modes;
  j["points"] = nlohmann::json::array();
  for (const PointResult& p : table.points) j["points"].push_back(point_json(p));
  out << j.dump(2) << '\n';
}

void write_json(std::ostream& out, const PointResult& point) {
  out << point_json(point).dump(2) << '\n';
}

}  // namespace unruh
