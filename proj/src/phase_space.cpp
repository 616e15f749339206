#include "unruh/phase_space.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "unruh/errors.hpp"

namespace unruh {

namespace {

// Gauss-Legendre rule on [0, 1]; log(I + X) = sum_j w_j X (I + x_j X)^{-1}
// is the diagonal [m/m] Pade approximant of the logarithm.
struct GaussLegendre {
  static constexpr int kNodes = 10;
  std::array<double, kNodes> nodes{};
  std::array<double, kNodes> weights{};

  GaussLegendre() {
    const int m = kNodes;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = 0.5 * (1.0 - x);
      weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

double norm1(const MatX& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

// Denman-Beavers iteration. Principal square root for matrices without
// eigenvalues on the closed negative real axis.
MatX sqrtm_denman_beavers(const MatX& a) {
  const auto n = a.rows();
  MatX y = a;
  MatX z = MatX::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    const MatX y_inv = y.partialPivLu().inverse();
    const MatX z_inv = z.partialPivLu().inverse();
    MatX y_next = 0.5 * (y + z_inv);
    MatX z_next = 0.5 * (z + y_inv);
    const double change = norm1(y_next - y);
    y = std::move(y_next);
    z = std::move(z_next);
    if (change <= 1e-15 * norm1(y)) return y;
  }
  throw LogBranchError("matrix square root did not converge");
}

void reject_negative_real_spectrum(const MatX& t) {
  const auto n = t.rows();
  const double scale = std::max(norm1(t), 1.0);
  for (Eigen::Index i = 0; i < n;) {
    const bool block = i + 1 < n && t(i + 1, i) != 0.0;
    if (block) {
      const double tr = t(i, i) + t(i + 1, i + 1);
      const double det = t(i, i) * t(i + 1, i + 1) - t(i, i + 1) * t(i + 1, i);
      const double disc = 0.25 * tr * tr - det;
      if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        for (double ev : {0.5 * tr + r, 0.5 * tr - r}) {
          if (ev <= 1e-300 * scale) {
            throw LogBranchError("eigenvalue " + std::to_string(ev) +
                                 " on the closed negative real axis");
          }
        }
      } else if (det == 0.0) {
        throw LogBranchError("singular matrix has no logarithm");
      }
      i += 2;
    } else {
      if (t(i, i) <= 0.0) {
        throw LogBranchError("eigenvalue " + std::to_string(t(i, i)) +
                             " on the closed negative real axis");
      }
      i += 1;
    }
  }
}

}  // namespace

MatX symplectic_form(int dimension) {
  if (dimension <= 0 || dimension % 2 != 0) {
    throw std::invalid_argument("symplectic form needs an even positive dimension");
  }
  MatX omega = MatX::Zero(dimension, dimension);
  for (int k = 0; k < dimension; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

Mat2 single_mode_form() {
  Mat2 j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

Mat2 rotation_matrix(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 r;
  r << c, s, -s, c;
  return r;
}

Vec4 vectorize(const Mat2& m) { return Vec4(m(0, 0), m(0, 1), m(1, 0), m(1, 1)); }

Mat2 devectorize(const Eigen::Ref<const VecX>& v) {
  if (v.size() != 4) {
    throw std::invalid_argument("devectorize expects a length-4 vector, got " +
                                std::to_string(v.size()));
  }
  Mat2 m;
  m << v(0), v(1), v(2), v(3);
  return m;
}

double check_symplectic(const Eigen::Ref<const MatX>& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("symplectic check needs a square matrix");
  if (s.rows() % 2 != 0 || s.rows() == 0) {
    throw std::invalid_argument("symplectic check needs an even dimension");
  }
  const MatX omega = symplectic_form(static_cast<int>(s.rows()));
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

MatX real_matrix_log(const Eigen::Ref<const MatX>& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("matrix logarithm needs a non-empty square matrix");
  }
  const auto n = m.rows();
  Eigen::RealSchur<MatX> schur(MatX(m), /*computeU=*/true);
  if (schur.info() != Eigen::Success) throw LogBranchError("real Schur factorisation failed");
  MatX t = schur.matrixT();
  const MatX u = schur.matrixU();
  reject_negative_real_spectrum(t);

  const MatX identity = MatX::Identity(n, n);
  int squarings = 0;
  while (norm1(t - identity) > 0.1) {
    t = sqrtm_denman_beavers(t);
    if (++squarings > 64) throw LogBranchError("inverse scaling did not approach the identity");
  }

  const MatX x = t - identity;
  const auto& rule = gauss_legendre();
  MatX log_t = MatX::Zero(n, n);
  for (int j = 0; j < GaussLegendre::kNodes; ++j) {
    const MatX denom = identity + rule.nodes[j] * x;
    log_t += rule.weights[j] * denom.partialPivLu().solve(x);
  }
  return std::ldexp(1.0, squarings) * (u * log_t * u.transpose());
}

MatX matrix_exp(const Eigen::Ref<const MatX>& m) { return MatX(m).exp(); }

double uncertainty_margin(const Eigen::Ref<const MatX>& sigma) {
  const auto n = sigma.rows();
  const Eigen::MatrixXcd h =
      sigma.cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) * symplectic_form(static_cast<int>(n)).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace unruh
