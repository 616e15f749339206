#pragma once

// Point evaluation and (a0, omega0) sweeps.
//
// Grid points are independent. `run_sweep` distributes them over an OpenMP
// team; `run_sweep_serial` is the reference loop. Both fill results by grid
// index, so the output never depends on the number of workers.

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "unruh/thermometry.hpp"

namespace unruh {

struct PointDiagnostics {
  double theta_phase;   ///< omega0 * tau_max
  double m_ratio;       ///< sqrt(1 + 2 / a0)
  double r_sweep;       ///< a0 omega0 / pi
  double spectral_gap;  ///< 1 - rho(T (x) T)
};

struct PointResult {
  double a0 = 0, omega0 = 0, lambda0 = 0;
  int n_modes = 0;
  ProbeState sigma_infinity = ProbeState::Constant(std::numeric_limits<double>::quiet_NaN());
  StandardForm standard_form{};
  ThermalityReport thermality{};
  PointDiagnostics diagnostics{};
  double dT0_da0 = std::numeric_limits<double>::quiet_NaN();
  /// max over both cavities of ||S Omega S^T - Omega||; NaN unless requested.
  double symplectic_defect = std::numeric_limits<double>::quiet_NaN();
  std::string error_code;  ///< empty on success
  std::string error_message;

  bool ok() const { return error_code.empty(); }
};

struct PointOptions {
  /// Integrate full symplectic matrices and record their defect.
  bool check_symplectic = false;
};

/// cell_channel -> fixed_point -> standard_form -> thermality. Never throws for
/// numerical failures; they land in `error_code`. Deterministic.
PointResult run_point(const CellConfig& config, const PointOptions& options = {});

/// `count` values spaced evenly in log between min and max (inclusive).
std::vector<double> log_space(double min, double max, int count);

struct SweepGrid {
  std::vector<double> a0_values;
  std::vector<double> omega0_values;
  double lambda0 = 0.01;
  int n_modes = 20;
  IntegratorControls integrator{};
  PointOptions options{};
};

/// 40 x 40, a0 in [1e-2, 1e2], omega0 in [pi/32, 4 pi], lambda0 = 0.01, N = 20.
SweepGrid default_sweep_grid();

/// Throws std::invalid_argument unless both axes are non-empty, strictly
/// increasing and positive.
void validate(const SweepGrid& grid);

struct SweepTable {
  SweepGrid grid;
  /// Row-major by (a0 index, omega0 index).
  std::vector<PointResult> points;

  const PointResult& at(std::size_t a0_index, std::size_t omega0_index) const {
    return points[a0_index * grid.omega0_values.size() + omega0_index];
  }
  PointResult& at(std::size_t a0_index, std::size_t omega0_index) {
    return points[a0_index * grid.omega0_values.size() + omega0_index];
  }
};

/// OpenMP-parallel sweep. `workers <= 0` uses the OpenMP default.
SweepTable run_sweep(const SweepGrid& grid, int workers = 0);
/// Reference implementation.
SweepTable run_sweep_serial(const SweepGrid& grid);

/// d f / d a from samples on an increasing a0 axis: three-point differences in
/// ln(a0) (central on a uniform log grid), one-sided at the ends, then the
/// chain rule. NaN where a needed sample is NaN. Needs at least 3 samples.
std::vector<double> log_derivative(const std::vector<double>& a0, const std::vector<double>& f);

/// Fills dT0_da0 of every point, one omega0 row at a time.
/// Throws std::invalid_argument for fewer than three a0 values.
void temperature_slope(SweepTable& table);

struct DiagnosticCurve {
  std::string family;  ///< "theta", "m" or "r"
  double label;        ///< n for Theta = n pi/2, M, or R
  std::vector<double> a0;
  std::vector<double> omega0;
};

/// Theta = n pi / 2, M = 3, 4, ... (a0 = 2 / (M^2 - 1)) and R = 1, 2, 3
/// curves clipped to the box.
std::vector<DiagnosticCurve> diagnostic_curves(double a0_min, double a0_max, double omega0_min,
                                               double omega0_max, int samples = 200);

struct ModeConvergenceCurve {
  int n_modes;
  std::vector<double> t0;
  std::vector<double> slope;
  /// First grid a0 where the slope departs from the reference (largest N)
  /// curve by more than 1%; NaN if it never does.
  double slope_split_a0;
  /// Largest grid a0 up to which every T0 agrees with the reference within 1%;
  /// NaN if the first point already disagrees.
  double t0_agrees_up_to;
};

struct ModeConvergence {
  std::vector<double> a0_values;
  double omega0;
  double lambda0;
  std::vector<ModeConvergenceCurve> curves;  ///< same order as n_list
};

/// Throws std::invalid_argument unless n_list is strictly ascending.
/// Failed points propagate as NaN.
ModeConvergence mode_convergence(const std::vector<double>& a0_values, double omega0,
                                 double lambda0, const std::vector<int>& n_list,
                                 const IntegratorControls& integrator = {}, int workers = 0);

struct PhysicalUnits {
  double length_m;
  double acceleration_m_s2;
  double acceleration_g;
  double omega_rad_s;
  double temperature_scale_K;  ///< kelvin per unit of T0
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kStandardGravity = 9.80665;
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kBoltzmann = 1.380649e-23;

/// a = a0 c^2 / L, Omega_P = omega0 c / L. Throws std::invalid_argument for L <= 0.
PhysicalUnits physical_units(double length_m, double a0, double omega0);

/// Column list of the frozen CSV schema.
const std::vector<std::string>& csv_columns();
void write_csv(std::ostream& out, const SweepTable& table);
void write_json(std::ostream& out, const SweepTable& table);
void write_json(std::ostream& out, const PointResult& point);

}  // namespace unruh
