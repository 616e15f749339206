#pragma once

// Linear algebra of Gaussian quantum mechanics on the quadrature phase space.
//
// Conventions used throughout the library:
//  * quadratures are ordered (q0, p0, q1, p1, ...);
//  * covariance matrices are normalised so that the vacuum is the identity,
//    sigma_ij = <{X_i, X_j}>, hence single-mode states have det(sigma) >= 1;
//  * vec() is row-major: vec(u v^T) = u (x) v and vec(A B C^T) = (A (x) C) vec(B).

#include <Eigen/Dense>

namespace unruh {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

/// Default bound on ||S Omega S^T - Omega||_max accepted as symplectic.
inline constexpr double kSymplecticTolerance = 1e-9;

/// Block-diagonal symplectic form diag(J, J, ...) with J = [[0, 1], [-1, 0]].
/// `dimension` must be even and positive.
MatX symplectic_form(int dimension);

/// J = [[0, 1], [-1, 0]].
Mat2 single_mode_form();

/// R(theta) = [[cos, sin], [-sin, cos]]; the free probe flow over a phase theta.
Mat2 rotation_matrix(double theta);

Vec4 vectorize(const Mat2& m);
/// Inverse of vectorize. Throws std::invalid_argument unless `v.size() == 4`.
Mat2 devectorize(const Eigen::Ref<const VecX>& v);

/// Max-norm deviation of S from the symplectic group.
/// Throws std::invalid_argument for non-square or odd-dimensional input.
double check_symplectic(const Eigen::Ref<const MatX>& s);

/// Principal real matrix logarithm.
///
/// Real Schur factorisation, repeated square roots of the quasi-triangular
/// factor until it is close to the identity, then a Gauss-Legendre
/// partial-fraction Pade approximant of log(I + X).
/// Throws LogBranchError when an eigenvalue is zero or real and negative.
MatX real_matrix_log(const Eigen::Ref<const MatX>& m);

/// Matrix exponential (scaling and squaring with a Pade approximant).
MatX matrix_exp(const Eigen::Ref<const MatX>& m);

/// Smallest eigenvalue of the Hermitian matrix sigma + i*Omega; non-negative
/// (up to rounding) exactly when sigma is a physical covariance matrix.
double uncertainty_margin(const Eigen::Ref<const MatX>& sigma);

}  // namespace unruh
