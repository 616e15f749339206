#pragma once

// Repeated affine Gaussian channels sigma -> T sigma T^T + R: iteration,
// fixed points, the 5x5 affine cell matrix and the interpolating
// (time-independent) Gaussian master equation.

#include <complex>

#include "unruh/cell.hpp"

namespace unruh {

/// 2x2 probe covariance matrix (vacuum = identity).
using ProbeState = Mat2;

ProbeState apply_channel(const GaussianChannel& channel, const ProbeState& sigma);

/// `then` o `first`.
GaussianChannel compose(const GaussianChannel& first, const GaussianChannel& then);

/// n-fold self composition, n >= 0.
GaussianChannel channel_power(const GaussianChannel& channel, int n);

/// Apply the channel `steps` times starting from sigma0.
ProbeState iterate_channel(const GaussianChannel& channel, const ProbeState& sigma0, long steps);

/// [[1, 0], [vec R, T (x) T]] acting on (1, vec sigma).
Mat5 affine_cell_matrix(const GaussianChannel& channel);

double spectral_radius(const Mat2& m);

/// 1 - rho(T (x) T); the per-cell contraction of deviations from the fixed point.
double spectral_gap(const GaussianChannel& channel);

/// Solves (I - T (x) T) vec(sigma) = vec(R).
/// Throws NoUniqueFixedPoint when rho(T (x) T) >= 1 - 1e-12.
ProbeState fixed_point(const GaussianChannel& channel);

/// Eigenvalues of the affine cell matrix.
Eigen::Matrix<std::complex<double>, 5, 1> convergence_spectrum(const GaussianChannel& channel);

/// Fixed point read off the eigenvector of the affine cell matrix at
/// eigenvalue one, normalised to first component one.
ProbeState fixed_point_from_spectrum(const GaussianChannel& channel);

/// d sigma / dt = D sigma + sigma D^T + C, whose flow over `delta_t`
/// reproduces the channel exactly.
struct IcmGenerator {
  Mat2 drift;  ///< D = Log(T) / delta_t
  Mat2 noise;  ///< C
  double delta_t;
};

/// Throws LogBranchError when T has no principal real logarithm.
IcmGenerator icm_generator(const GaussianChannel& channel, double delta_t);

/// Exact solution of the master equation at time t from sigma0.
ProbeState icm_flow(const IcmGenerator& generator, const ProbeState& sigma0, double t);

}  // namespace unruh
