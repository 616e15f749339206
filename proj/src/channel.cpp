#include "unruh/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "unruh/errors.hpp"

namespace unruh {

namespace {

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 k = Eigen::kroneckerProduct(a, b);
  return k;
}

Mat2 symmetrised(const Mat2& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

ProbeState apply_channel(const GaussianChannel& channel, const ProbeState& sigma) {
  return channel.t_matrix * sigma * channel.t_matrix.transpose() + channel.r_matrix;
}

GaussianChannel compose(const GaussianChannel& first, const GaussianChannel& then) {
  GaussianChannel out;
  out.t_matrix = then.t_matrix * first.t_matrix;
  out.r_matrix = then.t_matrix * first.r_matrix * then.t_matrix.transpose() + then.r_matrix;
  return out;
}

GaussianChannel channel_power(const GaussianChannel& channel, int n) {
  if (n < 0) throw std::invalid_argument("channel power must be non-negative");
  GaussianChannel out;  // identity
  for (int i = 0; i < n; ++i) out = compose(out, channel);
  return out;
}

ProbeState iterate_channel(const GaussianChannel& channel, const ProbeState& sigma0, long steps) {
  ProbeState sigma = sigma0;
  for (long i = 0; i < steps; ++i) sigma = apply_channel(channel, sigma);
  return sigma;
}

Mat5 affine_cell_matrix(const GaussianChannel& channel) {
  Mat5 m = Mat5::Zero();
  m(0, 0) = 1.0;
  m.block<4, 1>(1, 0) = vectorize(channel.r_matrix);
  m.block<4, 4>(1, 1) = kron(channel.t_matrix, channel.t_matrix);
  return m;
}

double spectral_radius(const Mat2& m) {
  const double tr = m.trace();
  const double det = m.determinant();
  const double disc = 0.25 * tr * tr - det;
  if (disc < 0.0) return std::sqrt(det);  // complex pair, |lambda|^2 = det
  const double r = std::sqrt(disc);
  return std::max(std::abs(0.5 * tr + r), std::abs(0.5 * tr - r));
}

double spectral_gap(const GaussianChannel& channel) {
  const double rho = spectral_radius(channel.t_matrix);
  return 1.0 - rho * rho;
}

ProbeState fixed_point(const GaussianChannel& channel) {
  const double gap = spectral_gap(channel);
  if (!(gap > 1e-12)) {
    throw NoUniqueFixedPoint("spectral radius of T (x) T is " + std::to_string(1.0 - gap) +
                             "; no unique attractive fixed point");
  }
  const Mat4 lhs = Mat4::Identity() - kron(channel.t_matrix, channel.t_matrix);
  const Vec4 v = lhs.fullPivLu().solve(vectorize(channel.r_matrix));
  return symmetrised(devectorize(v));
}

Eigen::Matrix<std::complex<double>, 5, 1> convergence_spectrum(const GaussianChannel& channel) {
  Eigen::EigenSolver<Mat5> solver(affine_cell_matrix(channel), /*computeEigenvectors=*/false);
  return solver.eigenvalues();
}

ProbeState fixed_point_from_spectrum(const GaussianChannel& channel) {
  Eigen::EigenSolver<Mat5> solver(affine_cell_matrix(channel), /*computeEigenvectors=*/true);
  const auto values = solver.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (std::abs(values(i) - 1.0) < std::abs(values(best) - 1.0)) best = i;
  }
  const Eigen::Matrix<std::complex<double>, 5, 1> v = solver.eigenvectors().col(best);
  if (std::abs(v(0)) < 1e-300) {
    throw NoUniqueFixedPoint("unit eigenvector does not meet the affine subspace");
  }
  Vec4 vec_sigma;
  for (int k = 0; k < 4; ++k) vec_sigma(k) = (v(k + 1) / v(0)).real();
  return symmetrised(devectorize(vec_sigma));
}

IcmGenerator icm_generator(const GaussianChannel& channel, double delta_t) {
  if (!(delta_t > 0.0)) throw std::invalid_argument("delta_t must be positive");
  IcmGenerator g;
  g.delta_t = delta_t;
  g.drift = real_matrix_log(channel.t_matrix) / delta_t;
  // Generator of sigma -> D sigma + sigma D^T on vec(sigma). This equals
  // Log(T (x) T) / delta_t whenever the principal branches are compatible.
  const Mat4 kron_sum = kron(g.drift, Mat2::Identity()) + kron(Mat2::Identity(), g.drift);
  const Mat4 step = kron(channel.t_matrix, channel.t_matrix) - Mat4::Identity();
  const Vec4 c = kron_sum * step.fullPivLu().solve(vectorize(channel.r_matrix));
  g.noise = symmetrised(devectorize(c));
  return g;
}

ProbeState icm_flow(const IcmGenerator& generator, const ProbeState& sigma0, double t) {
  Mat5 lift = Mat5::Zero();
  lift.block<4, 1>(1, 0) = vectorize(generator.noise);
  lift.block<4, 4>(1, 1) = kron(generator.drift, Mat2::Identity()) +
                           kron(Mat2::Identity(), generator.drift);
  const MatX propagator = matrix_exp(t * lift);
  Eigen::Matrix<double, 5, 1> state;
  state(0) = 1.0;
  state.tail<4>() = vectorize(sigma0);
  const Eigen::Matrix<double, 5, 1> out = propagator * state;
  return symmetrised(devectorize(out.tail<4>()));
}

}  // namespace unruh
