#pragma once

// Dynamics of the probe across one two-cavity cell.
//
// Everything is dimensionless: hbar = c = k_B = L = 1. The probe accelerates
// from rest through cavity 1 and decelerates back to rest through cavity 2.
// Each cavity holds a Dirichlet scalar field truncated to `n_modes` modes
// (frequencies n*pi) that starts in its vacuum.

#include <vector>

#include "unruh/phase_space.hpp"

namespace unruh {

struct IntegratorControls {
  int initial_steps = 256;
  double richardson_tol = 1e-9;
  int max_doublings = 8;
};

struct CellConfig {
  double a0 = 1.0;       ///< proper acceleration a L / c^2
  double omega0 = 0.19634954084936207;  ///< probe gap Omega_P L / c (pi/16)
  double lambda0 = 0.01;  ///< coupling lambda L / sqrt(hbar c)
  int n_modes = 20;
  IntegratorControls integrator{};
};

/// Throws std::invalid_argument unless a0 > 0, omega0 > 0, lambda0 >= 0,
/// n_modes >= 1 and the integrator controls are usable.
void validate(const CellConfig& config);

struct CellKinematics {
  double tau_max;    ///< proper time to cross one cavity
  double t_max;      ///< lab time to cross one cavity (= M)
  double gamma_max;  ///< 1 + a0
  double m_ratio;    ///< crossing time over light-crossing time
  double a0;

  /// Probe phase accumulated across one cavity.
  double theta(double omega0) const { return omega0 * tau_max; }
  /// Cavity modes swept by the Doppler-shifted gap, (gamma_max - 1) omega0 / pi.
  double r_sweep(double omega0) const;
};

/// acosh(x) for x >= 1, accurate when x - 1 is tiny.
double stable_acosh(double x);

/// Throws std::invalid_argument for a0 <= 0.
CellKinematics cell_kinematics(double a0);

struct TrajectoryPoint {
  double t_local;  ///< lab time since entering the current cavity
  double x_local;  ///< position inside the current cavity, in [0, 1]
  int cavity;      ///< 1 (accelerating) or 2 (decelerating)
};

/// Probe world line at proper time tau in [0, 2 tau_max], measured from the
/// start of the cell. Throws std::invalid_argument outside that interval.
TrajectoryPoint trajectory(double tau, const CellConfig& config);

/// Dimensionless amplitude g_n multiplying q_P (q_n cos + p_n sin) in the
/// interaction Hamiltonian: 2 lambda0 sin(n pi x) / sqrt(n pi).
double mode_coupling(int n, double x_local, const CellConfig& config);

/// Quadratic form F(tau) of the interaction-picture Hamiltonian
/// H = X^T F X / 2 on (probe, mode 1, ..., mode N).
MatX interaction_generator(double tau, const CellConfig& config);

/// Time-ordered exponential of Omega F over cavity `cavity` (1 or 2).
/// Midpoint exponentials, step doubling and Richardson extrapolation.
/// Throws IntegratorNoConvergence.
MatX integrate_cavity(int cavity, const CellConfig& config);

/// The two probe rows of the same symplectic matrix, computed at O(N) cost
/// per step. Everything the reduced channel depends on lives in these rows.
MatX integrate_cavity_probe_rows(int cavity, const CellConfig& config);

/// Affine action sigma -> T sigma T^T + R on the probe covariance matrix.
struct GaussianChannel {
  Mat2 t_matrix = Mat2::Identity();
  Mat2 r_matrix = Mat2::Zero();
};

/// Channel induced on the probe by S when the field starts in vacuum.
/// Accepts either the full symplectic matrix or its first two rows.
GaussianChannel reduce_channel(const Eigen::Ref<const MatX>& s);

/// Schrodinger-picture channel of one full cell:
/// U0^2 o Phi_2 o Phi_1 with U0 the free probe rotation over tau_max.
GaussianChannel cell_channel(const CellConfig& config);

struct CheckedCellChannel {
  GaussianChannel channel;
  double symplectic_defect_1;
  double symplectic_defect_2;
};

/// Same channel, but computed from the full symplectic matrices so that the
/// symplectic defect of each cavity can be reported.
CheckedCellChannel cell_channel_checked(const CellConfig& config);

/// Compose two cavity channels into the cell channel (exposed for oracles
/// and tests).
GaussianChannel compose_cell(const GaussianChannel& first, const GaussianChannel& second,
                             double theta);

/// Smallest eigenvalue of the Hermitian matrix R + i(Omega - T Omega T^T).
/// Non-negative exactly when the channel is completely positive.
double complete_positivity_margin(const GaussianChannel& channel);

}  // namespace unruh
