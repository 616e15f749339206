// Command-line driver: single points, sweeps, slope maps, mode-convergence
// studies, unit conversions and the oracle suite.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unruh/config_io.hpp"
#include "unruh/errors.hpp"
#include "unruh/oracles.hpp"
#include "unruh/sweep.hpp"

namespace {

using namespace unruh;

struct Flags {
  std::string config_path;
  std::string a0, omega0, lambda0;
  int n_modes = 0;
  std::string grid_a0, grid_omega0;
  std::string out;
  std::string format;
  int workers = 0;
  bool seedless = false;
  bool check_symplectic = false;
  std::string n_list;
  std::string diagnostics;
  double length_m = 0.0;
};

struct Options {
  CLI::Option* a0 = nullptr;
  CLI::Option* omega0 = nullptr;
  CLI::Option* lambda0 = nullptr;
  CLI::Option* n_modes = nullptr;
  CLI::Option* workers = nullptr;
  CLI::Option* length = nullptr;
};

RunConfig resolve(const Flags& f, const Options& o) {
  RunConfig rc = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
  if (o.a0->count()) rc.cell.a0 = parse_real(f.a0);
  if (o.omega0->count()) rc.cell.omega0 = parse_real(f.omega0);
  if (o.lambda0->count()) rc.cell.lambda0 = parse_real(f.lambda0);
  if (o.n_modes->count()) rc.cell.n_modes = f.n_modes;
  rc.grid.lambda0 = rc.cell.lambda0;
  rc.grid.n_modes = rc.cell.n_modes;
  rc.grid.integrator = rc.cell.integrator;
  if (!f.grid_a0.empty()) rc.grid.a0_values = parse_grid(f.grid_a0);
  if (!f.grid_omega0.empty()) rc.grid.omega0_values = parse_grid(f.grid_omega0);
  if (f.check_symplectic) rc.grid.options.check_symplectic = true;
  if (!f.out.empty()) rc.output_path = f.out;
  if (!f.format.empty()) rc.format = f.format;
  if (o.workers->count()) rc.workers = f.workers;
  if (o.length->count()) rc.length_m = f.length_m;
  if (!f.n_list.empty()) {
    rc.n_list.clear();
    std::stringstream ss(f.n_list);
    std::string item;
    while (std::getline(ss, item, ',')) rc.n_list.push_back(static_cast<int>(parse_real(item)));
  }
  return rc;
}

// Writes to the configured path, or stdout when none is set.
template <class Fn>
void emit(const RunConfig& rc, Fn&& write) {
  if (rc.output_path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(rc.output_path);
  if (!out) throw InvalidConfig("cannot write '" + rc.output_path + "'");
  write(out);
}

void write_table(const RunConfig& rc, const SweepTable& table) {
  emit(rc, [&](std::ostream& os) {
    if (rc.format == "json") {
      write_json(os, table);
    } else {
      write_csv(os, table);
    }
  });
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_point(const RunConfig& rc, bool check) {
  const PointResult p = run_point(rc.cell, PointOptions{check});
  if (rc.format == "json") {
    emit(rc, [&](std::ostream& os) { write_json(os, p); });
  } else {
    SweepTable t;
    t.grid.a0_values = {p.a0};
    t.grid.omega0_values = {p.omega0};
    t.points = {p};
    write_table(rc, t);
  }
  if (!p.ok()) std::cerr << p.error_code << ": " << p.error_message << '\n';
  return p.ok() ? 0 : 1;
}

int cmd_sweep(const RunConfig& rc, bool require_slope, const std::string& diagnostics_path) {
  SweepTable table = run_sweep(rc.grid, rc.workers);
  if (table.grid.a0_values.size() >= 3) {
    temperature_slope(table);
  } else if (require_slope) {
    throw std::invalid_argument("slope needs at least three a0 values");
  }
  write_table(rc, table);
  if (!diagnostics_path.empty()) {
    const auto& a = rc.grid.a0_values;
    const auto& w = rc.grid.omega0_values;
    const auto curves = diagnostic_curves(a.front(), a.back(), w.front(), w.back());
    std::ofstream out(diagnostics_path);
    if (!out) throw InvalidConfig("cannot write '" + diagnostics_path + "'");
    out << "family,label,a0,omega0\n";
    for (const auto& c : curves) {
      for (std::size_t i = 0; i < c.a0.size(); ++i) {
        out << c.family << ',' << num(c.label) << ',' << num(c.a0[i]) << ',' << num(c.omega0[i])
            << '\n';
      }
    }
  }
  std::size_t failed = 0;
  for (const auto& p : table.points) failed += p.ok() ? 0 : 1;
  if (failed) std::cerr << failed << " of " << table.points.size() << " points failed\n";
  return 0;
}

int cmd_modes(const RunConfig& rc) {
  const ModeConvergence mc = mode_convergence(rc.grid.a0_values, rc.cell.omega0, rc.cell.lambda0,
                                              rc.n_list, rc.cell.integrator, rc.workers);
  emit(rc, [&](std::ostream& os) {
    if (rc.format == "json") {
      nlohmann::json j;
      j["a0_values"] = mc.a0_values;
      j["omega0"] = mc.omega0;
      j["lambda0"] = mc.lambda0;
      for (const auto& c : mc.curves) {
        nlohmann::json jc;
        jc["n_modes"] = c.n_modes;
        jc["T0"] = c.t0;
        jc["slope"] = c.slope;
        jc["slope_split_a0"] = std::isnan(c.slope_split_a0) ? nlohmann::json() : nlohmann::json(c.slope_split_a0);
        jc["t0_agrees_up_to"] = std::isnan(c.t0_agrees_up_to) ? nlohmann::json() : nlohmann::json(c.t0_agrees_up_to);
        j["curves"].push_back(jc);
      }
      os << j.dump(2) << '\n';
      return;
    }
    os << "# unruh-modes csv schema v1\n";
    for (const auto& c : mc.curves) {
      os << "# N=" << c.n_modes << " slope_split_a0=" << num(c.slope_split_a0)
         << " t0_agrees_up_to=" << num(c.t0_agrees_up_to) << '\n';
    }
    os << "a0";
    for (const auto& c : mc.curves) os << ",T0_N" << c.n_modes << ",slope_N" << c.n_modes;
    os << '\n';
    for (std::size_t i = 0; i < mc.a0_values.size(); ++i) {
      os << num(mc.a0_values[i]);
      for (const auto& c : mc.curves) os << ',' << num(c.t0[i]) << ',' << num(c.slope[i]);
      os << '\n';
    }
  });
  return 0;
}

int cmd_units(const RunConfig& rc) {
  const PhysicalUnits u = physical_units(rc.length_m, rc.cell.a0, rc.cell.omega0);
  emit(rc, [&](std::ostream& os) {
    if (rc.format == "json") {
      nlohmann::json j = {{"length_m", u.length_m},
                          {"a0", rc.cell.a0},
                          {"omega0", rc.cell.omega0},
                          {"acceleration_m_s2", u.acceleration_m_s2},
                          {"acceleration_g", u.acceleration_g},
                          {"omega_rad_s", u.omega_rad_s},
                          {"temperature_scale_K", u.temperature_scale_K}};
      os << j.dump(2) << '\n';
      return;
    }
    os << "length_m," << num(u.length_m) << '\n'
       << "a0," << num(rc.cell.a0) << '\n'
       << "omega0," << num(rc.cell.omega0) << '\n'
       << "acceleration_m_s2," << num(u.acceleration_m_s2) << '\n'
       << "acceleration_g," << num(u.acceleration_g) << '\n'
       << "omega_rad_s," << num(u.omega_rad_s) << '\n'
       << "temperature_scale_K," << num(u.temperature_scale_K) << '\n';
  });
  return 0;
}

struct Row {
  std::string name;
  double value;
  double bound;
  bool pass;
};

GaussianChannel gaussian_cavity(const CellConfig& c) {
  return reduce_channel(integrate_cavity_probe_rows(1, c));
}

struct DysonResidual {
  double t, r;
};

DysonResidual dyson_residual(CellConfig c, double lambda) {
  c.lambda0 = lambda;
  const GaussianChannel exact = gaussian_cavity(c);
  const GaussianChannel pert = perturbative_cavity_channel(1, c);
  return {(exact.t_matrix - pert.t_matrix).cwiseAbs().maxCoeff(),
          (exact.r_matrix - pert.r_matrix).cwiseAbs().maxCoeff()};
}

int cmd_verify() {
  constexpr double kPi = 3.14159265358979323846;
  std::vector<Row> rows;

  CellConfig c;
  c.a0 = 1.0;
  c.omega0 = kPi / 16.0;
  c.n_modes = 5;
  c.integrator.richardson_tol = 1e-13;
  c.integrator.max_doublings = 12;

  const DysonResidual d1 = dyson_residual(c, 1e-3);
  const DysonResidual d2 = dyson_residual(c, 2e-3);
  const DysonResidual d4 = dyson_residual(c, 4e-3);
  rows.push_back({"dyson R residual / lambda0^2 at 1e-3", d1.r / 1e-6, 1e-4, d1.r / 1e-6 <= 1e-4});
  rows.push_back({"dyson T residual / lambda0^2 at 1e-3", d1.t / 1e-6, 1e-4, d1.t / 1e-6 <= 1e-4});
  const double g1 = d2.r / d1.r;
  const double g2 = d4.r / d2.r;
  rows.push_back({"dyson R residual growth 1e-3 -> 2e-3", g1, 16.0, std::abs(g1 / 16.0 - 1.0) < 0.15});
  rows.push_back({"dyson R residual growth 2e-3 -> 4e-3", g2, 16.0, std::abs(g2 / 16.0 - 1.0) < 0.15});

  CellConfig zero = c;
  zero.lambda0 = 0.0;
  const GaussianChannel id = perturbative_channel(zero);
  const double dz = std::max((id.t_matrix - rotation_matrix(2.0 * cell_kinematics(1.0).theta(c.omega0)))
                                 .cwiseAbs().maxCoeff(),
                             id.r_matrix.cwiseAbs().maxCoeff());
  rows.push_back({"dyson at lambda0 = 0 is free rotation", dz, 1e-15, dz <= 1e-15});

  FockConfig fc;
  fc.n_modes = 2;
  fc.fock_cutoff = 8;
  fc.base = c;
  fc.base.lambda0 = 0.05;
  fc.base.n_modes = 2;
  const FockResult fr = fock_truncated_evolution(fc);
  const GaussianChannel g = gaussian_cavity(fc.base);
  const Mat2 gaussian_sigma = g.t_matrix * g.t_matrix.transpose() + g.r_matrix;
  const double df = (fr.sigma - gaussian_sigma).cwiseAbs().maxCoeff();
  rows.push_back({"fock vs gaussian cavity, lambda0 = 0.05", df, 1e-3, df <= 1e-3});
  rows.push_back({"fock norm drift", fr.max_norm_drift, 1e-9, fr.max_norm_drift <= 1e-9});
  rows.push_back({"fock cutoff doubling change", fr.cutoff_change, 10.0 * fc.ode_tol,
                  fr.cutoff_change < 10.0 * fc.ode_tol});

  FockConfig fz = fc;
  fz.base.lambda0 = 0.0;
  const FockResult frz = fock_truncated_evolution(fz);
  const double dfz = (frz.sigma - Mat2::Identity()).cwiseAbs().maxCoeff();
  rows.push_back({"fock at lambda0 = 0 stays vacuum", dfz, 1e-15, dfz <= 1e-15});

  bool all = true;
  std::printf("%-44s %-24s %-12s %s\n", "check", "value", "bound", "result");
  for (const Row& r : rows) {
    std::printf("%-44s %-24.17g %-12.3g %s\n", r.name.c_str(), r.value, r.bound,
                r.pass ? "PASS" : "FAIL");
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated harmonic-oscillator detector in a chain of Dirichlet cavities"};
  app.fallthrough();
  app.require_subcommand(1);

  Flags f;
  Options o;
  app.add_option("--config", f.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  o.a0 = app.add_option("--a0", f.a0, "proper acceleration a L / c^2");
  o.omega0 = app.add_option("--omega0", f.omega0, "probe gap Omega_P L / c (accepts pi/16)");
  o.lambda0 = app.add_option("--lambda0", f.lambda0, "coupling strength");
  o.n_modes = app.add_option("--n-modes", f.n_modes, "field modes per cavity")->check(CLI::PositiveNumber);
  app.add_option("--grid-a0", f.grid_a0, "log-spaced a0 grid min:max:count");
  app.add_option("--grid-omega0", f.grid_omega0, "log-spaced omega0 grid min:max:count");
  app.add_option("--out", f.out, "output file (default stdout)");
  app.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  o.workers = app.add_option("--workers", f.workers, "OpenMP threads (0 = default)")
                  ->check(CLI::NonNegativeNumber);
  app.add_flag("--seedless", f.seedless, "no-op: every computation is deterministic");
  o.length = app.add_option("--length", f.length_m, "cavity length in metres");

  auto* point = app.add_subcommand("point", "evaluate one (a0, omega0) point");
  point->add_flag("--check-symplectic", f.check_symplectic, "integrate full symplectic matrices");
  auto* sweep = app.add_subcommand("sweep", "evaluate an (a0, omega0) grid");
  sweep->add_flag("--check-symplectic", f.check_symplectic, "integrate full symplectic matrices");
  auto* slope = app.add_subcommand("slope", "dT0/da0 over an (a0, omega0) grid");
  slope->add_option("--diagnostics", f.diagnostics, "write Theta, M and R curves to this CSV");
  auto* modes = app.add_subcommand("modes", "slope curves for several mode counts");
  modes->add_option("--n-list", f.n_list, "ascending mode counts, e.g. 10,20,210");
  auto* units = app.add_subcommand("units", "convert a0 and omega0 to lab units");
  auto* verify = app.add_subcommand("verify", "run the oracle suite");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig rc = resolve(f, o);
    if (*point) return cmd_point(rc, f.check_symplectic);
    if (*sweep) return cmd_sweep(rc, false, "");
    if (*slope) return cmd_sweep(rc, true, f.diagnostics);
    if (*modes) return cmd_modes(rc);
    if (*units) return cmd_units(rc);
    if (*verify) return cmd_verify();
  } catch (const unruh::Error& e) {
    std::cerr << e.code() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
