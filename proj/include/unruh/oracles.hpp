#pragma once

// Reference implementations that validate the Gaussian pipeline from
// independent directions:
//  * a second-order Dyson expansion of the cavity channels, with every
//    integral done by adaptive quadrature;
//  * brute-force Schrodinger evolution in a truncated number basis.
// Only the world line is shared with the main pipeline.

#include <complex>
#include <vector>

#include "unruh/channel.hpp"

namespace unruh {

/// T = I + lambda0^2 t2 and R = lambda0^2 r2 for one cavity.
struct DysonCoefficients {
  Mat2 t2 = Mat2::Zero();
  Mat2 r2 = Mat2::Zero();
};

/// Second-order coefficients of cavity 1 or 2 (interaction picture), with
/// the coupling factored out. Accurate to `abs_tol` on the coefficients.
/// Throws QuadratureFailure.
DysonCoefficients dyson_coefficients(int cavity, const CellConfig& config, double abs_tol = 1e-12);

/// Interaction-picture channel of one cavity to second order in lambda0.
/// A negative lambda0 is accepted (the result depends on lambda0^2 only).
GaussianChannel perturbative_cavity_channel(int cavity, const CellConfig& config,
                                            double abs_tol = 1e-12);

/// Cell channel built from the two perturbative cavity channels.
GaussianChannel perturbative_channel(const CellConfig& config, double abs_tol = 1e-12);

struct FockConfig {
  int n_modes = 2;      ///< field modes kept, <= 3
  int fock_cutoff = 8;  ///< highest occupation per oscillator, <= 10
  double ode_tol = 1e-11;
  CellConfig base{};
};

/// Throws std::invalid_argument unless the bounds hold and the doubled-cutoff
/// space used by the convergence test has at most 1e5 states.
void validate(const FockConfig& config);

using FockState = std::vector<std::complex<double>>;

/// Interaction-picture Hamiltonian of probe + `n_modes` field modes in cavity 1,
/// with ladder operators truncated at `cutoff`.
class FockHamiltonian {
 public:
  FockHamiltonian(const CellConfig& base, int n_modes, int cutoff);

  std::size_t dimension() const { return dimension_; }
  int cutoff() const { return cutoff_; }
  int n_modes() const { return n_modes_; }

  /// out = H(tau) psi, OpenMP over basis states.
  void apply(double tau, const FockState& psi, FockState& out) const;
  /// Same result, single thread.
  void apply_serial(double tau, const FockState& psi, FockState& out) const;

  /// Basis index of the product state with the given occupations (probe first).
  std::size_t index(const std::vector<int>& occupations) const;

 private:
  struct Terms {
    // Coefficients of a a_n, a a_n^dag, a^dag a_n, a^dag a_n^dag for each mode.
    std::vector<std::complex<double>> c;
  };
  Terms terms_at(double tau) const;
  void apply_row(std::size_t m, const Terms& terms, const FockState& psi, FockState& out) const;

  CellConfig base_;
  int n_modes_;
  int cutoff_;
  std::size_t dimension_;
  std::vector<std::size_t> stride_;
  std::vector<double> sqrt_;
};

struct FockRun {
  ProbeState sigma;
  double max_norm_drift;  ///< max | ||psi|| - 1 | over accepted steps
  long steps;
};

/// Evolves vacuum (x) vacuum across cavity 1 at a fixed cutoff.
FockRun fock_evolve(const FockConfig& config, int cutoff, bool parallel = true);

struct FockResult {
  ProbeState sigma;  ///< at the requested cutoff
  double cutoff_change;  ///< max entry change when the cutoff is doubled
  double max_norm_drift;
};

/// Probe covariance after cavity 1 by number-basis integration. Throws
/// CutoffNotConverged when doubling the cutoff moves an entry by 10 ode_tol
/// or more.
FockResult fock_truncated_evolution(const FockConfig& config);

}  // namespace unruh
