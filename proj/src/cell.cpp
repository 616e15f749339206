#include "unruh/cell.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "unruh/errors.hpp"

namespace unruh {

namespace {

// 2 sinh(y/2)^2 = cosh(y) - 1 without cancellation at small y.
double cosh_minus_one(double y) {
  const double s = std::sinh(0.5 * y);
  return 2.0 * s * s;
}

struct Sample {
  Vec2 probe;  // (cos, sin) of the probe phase
  VecX field;  // g_n (cos, sin) of the n-th mode phase, interleaved
};

// Evaluates the probe and field phase vectors along one cavity. `s` is the
// proper time elapsed since entering the cavity. The lab-time origin of the
// field modes is reset at each cavity entry.
class CavitySampler {
 public:
  CavitySampler(int cavity, const CellConfig& config)
      : cavity_(cavity), config_(config), kin_(cell_kinematics(config.a0)) {
    sample_.field.resize(2 * config.n_modes);
  }

  double duration() const { return kin_.tau_max; }

  const Sample& at(double s) {
    const double a = config_.a0;
    double x, t, probe_phase;
    if (cavity_ == 1) {
      x = cosh_minus_one(a * s) / a;
      t = std::sinh(a * s) / a;
      probe_phase = config_.omega0 * s;
    } else {
      const double mirror = kin_.tau_max - s;
      x = 1.0 - cosh_minus_one(a * mirror) / a;
      t = kin_.t_max - std::sinh(a * mirror) / a;
      probe_phase = config_.omega0 * (kin_.tau_max + s);
    }
    sample_.probe = Vec2(std::cos(probe_phase), std::sin(probe_phase));

    // e^{i n pi x} and e^{i n pi t} by repeated multiplication.
    const std::complex<double> step_x = std::polar(1.0, M_PI * x);
    const std::complex<double> step_t = std::polar(1.0, M_PI * t);
    std::complex<double> zx = step_x;
    std::complex<double> zt = step_t;
    const double amplitude = 2.0 * config_.lambda0;
    for (int n = 1; n <= config_.n_modes; ++n) {
      const double g = amplitude * zx.imag() / std::sqrt(n * M_PI);
      sample_.field[2 * (n - 1)] = g * zt.real();
      sample_.field[2 * (n - 1) + 1] = g * zt.imag();
      zx *= step_x;
      zt *= step_t;
    }
    return sample_;
  }

 private:
  int cavity_;
  CellConfig config_;
  CellKinematics kin_;
  Sample sample_;
};

// Product of midpoint exponentials, later times on the left. With
// F = U w^T + w U^T the matrix Omega F squares to zero, so each factor
// exp(h Omega F) = I + h Omega F is exact and symplectic.
MatX midpoint_product_full(int cavity, const CellConfig& config, int steps) {
  CavitySampler sampler(cavity, config);
  const int dim = 2 * (config.n_modes + 1);
  const int nf = 2 * config.n_modes;
  const double h = sampler.duration() / steps;
  MatX s = MatX::Identity(dim, dim);
  Eigen::RowVectorXd c(dim), d(dim);
  VecX b(nf);
  for (int k = 0; k < steps; ++k) {
    const Sample& smp = sampler.at((k + 0.5) * h);
    const Vec2 a(smp.probe(1), -smp.probe(0));
    for (int j = 0; j < nf; j += 2) {
      b(j) = smp.field(j + 1);
      b(j + 1) = -smp.field(j);
    }
    c.noalias() = smp.field.transpose() * s.bottomRows(nf);
    d.noalias() = smp.probe.transpose() * s.topRows(2);
    s.topRows(2).noalias() += h * a * c;
    s.bottomRows(nf).noalias() += h * b * d;
  }
  return s;
}

// First two rows of the same product, accumulated from the latest factor
// backwards: e^T E_K ... E_1.
MatX midpoint_product_probe_rows(int cavity, const CellConfig& config, int steps) {
  CavitySampler sampler(cavity, config);
  const int dim = 2 * (config.n_modes + 1);
  const int nf = 2 * config.n_modes;
  const double h = sampler.duration() / steps;
  MatX rows = MatX::Zero(2, dim);
  rows(0, 0) = 1.0;
  rows(1, 1) = 1.0;
  VecX b(nf);
  for (int k = steps - 1; k >= 0; --k) {
    const Sample& smp = sampler.at((k + 0.5) * h);
    const Vec2 a(smp.probe(1), -smp.probe(0));
    for (int j = 0; j < nf; j += 2) {
      b(j) = smp.field(j + 1);
      b(j + 1) = -smp.field(j);
    }
    const Vec2 ra = rows.leftCols(2) * a;
    const Vec2 rb = rows.rightCols(nf) * b;
    rows.rightCols(nf).noalias() += h * ra * smp.field.transpose();
    rows.leftCols(2).noalias() += h * rb * smp.probe.transpose();
  }
  return rows;
}

// The midpoint product is symmetric, so its error expands in even powers of
// the step. One Richardson step removes the h^2 term; the extrapolant stays
// symplectic up to the square of the difference between the two levels.
template <class Product>
MatX step_doubled(const IntegratorControls& ctl, Product&& product) {
  long steps = ctl.initial_steps;
  MatX coarse = product(static_cast<int>(steps));
  MatX previous;
  for (int doubling = 1; doubling <= ctl.max_doublings; ++doubling) {
    steps *= 2;
    MatX fine = product(static_cast<int>(steps));
    MatX extrapolated = (4.0 * fine - coarse) / 3.0;
    if (doubling >= 2 &&
        (extrapolated - previous).cwiseAbs().maxCoeff() < ctl.richardson_tol) {
      return extrapolated;
    }
    previous = std::move(extrapolated);
    coarse = std::move(fine);
  }
  throw IntegratorNoConvergence("cavity integration did not reach tolerance " +
                                std::to_string(ctl.richardson_tol) + " after " +
                                std::to_string(ctl.max_doublings) + " doublings (" +
                                std::to_string(steps) + " steps)");
}

void check_cavity_index(int cavity) {
  if (cavity != 1 && cavity != 2) throw std::invalid_argument("cavity index must be 1 or 2");
}

}  // namespace

void validate(const CellConfig& config) {
  if (!(config.a0 > 0.0) || !std::isfinite(config.a0)) {
    throw std::invalid_argument("a0 must be positive and finite");
  }
  if (!(config.omega0 > 0.0) || !std::isfinite(config.omega0)) {
    throw std::invalid_argument("omega0 must be positive and finite");
  }
  if (!(config.lambda0 >= 0.0) || !std::isfinite(config.lambda0)) {
    throw std::invalid_argument("lambda0 must be non-negative and finite");
  }
  if (config.n_modes < 1) throw std::invalid_argument("n_modes must be at least 1");
  const auto& ctl = config.integrator;
  if (ctl.initial_steps < 1) throw std::invalid_argument("initial_steps must be at least 1");
  if (!(ctl.richardson_tol > 0.0)) throw std::invalid_argument("richardson_tol must be positive");
  if (ctl.max_doublings < 2 || ctl.max_doublings > 24) {
    throw std::invalid_argument("max_doublings must lie in [2, 24]");
  }
}

double stable_acosh(double x) {
  if (x < 1.0) throw std::invalid_argument("acosh argument below 1");
  const double e = x - 1.0;
  if (e < 1e-8) {
    // acosh(1 + e) = sqrt(2e) (1 - e/12 + 3e^2/160 - ...)
    return std::sqrt(2.0 * e) * (1.0 - e / 12.0 + 3.0 * e * e / 160.0);
  }
  return std::log(x + std::sqrt(x * x - 1.0));
}

double CellKinematics::r_sweep(double omega0) const { return a0 * omega0 / M_PI; }

CellKinematics cell_kinematics(double a0) {
  if (!(a0 > 0.0) || !std::isfinite(a0)) throw std::invalid_argument("a0 must be positive");
  CellKinematics k{};
  k.a0 = a0;
  k.gamma_max = 1.0 + a0;
  // acosh(1 + a0) without forming 1 + a0, which rounds away small a0.
  k.tau_max = std::log1p(a0 + std::sqrt(a0 * (2.0 + a0))) / a0;
  k.t_max = std::sqrt(1.0 + 2.0 / a0);
  k.m_ratio = k.t_max;
  return k;
}

TrajectoryPoint trajectory(double tau, const CellConfig& config) {
  const CellKinematics kin = cell_kinematics(config.a0);
  const double a = config.a0;
  const double slack = 1e-12 * kin.tau_max;
  if (!(tau >= -slack) || !(tau <= 2.0 * kin.tau_max + slack)) {
    throw std::invalid_argument("proper time outside [0, 2 tau_max]");
  }
  TrajectoryPoint p{};
  if (tau <= kin.tau_max) {
    const double s = std::max(tau, 0.0);
    p.cavity = 1;
    p.x_local = cosh_minus_one(a * s) / a;
    p.t_local = std::sinh(a * s) / a;
  } else {
    const double mirror = std::max(2.0 * kin.tau_max - tau, 0.0);
    p.cavity = 2;
    p.x_local = 1.0 - cosh_minus_one(a * mirror) / a;
    p.t_local = kin.t_max - std::sinh(a * mirror) / a;
  }
  p.x_local = std::clamp(p.x_local, 0.0, 1.0);
  return p;
}

double mode_coupling(int n, double x_local, const CellConfig& config) {
  if (n < 1 || n > config.n_modes) throw std::invalid_argument("mode index out of range");
  if (!(x_local >= 0.0 && x_local <= 1.0)) throw std::invalid_argument("x_local outside [0, 1]");
  return 2.0 * config.lambda0 * std::sin(n * M_PI * x_local) / std::sqrt(n * M_PI);
}

MatX interaction_generator(double tau, const CellConfig& config) {
  const TrajectoryPoint p = trajectory(tau, config);
  const int dim = 2 * (config.n_modes + 1);
  MatX f = MatX::Zero(dim, dim);
  const Vec2 u(std::cos(config.omega0 * tau), std::sin(config.omega0 * tau));
  for (int n = 1; n <= config.n_modes; ++n) {
    const double g = mode_coupling(n, p.x_local, config);
    const Vec2 v(std::cos(n * M_PI * p.t_local), std::sin(n * M_PI * p.t_local));
    const Mat2 block = g * u * v.transpose();
    f.block<2, 2>(0, 2 * n) = block;
    f.block<2, 2>(2 * n, 0) = block.transpose();
  }
  return f;
}

MatX integrate_cavity(int cavity, const CellConfig& config) {
  validate(config);
  check_cavity_index(cavity);
  return step_doubled(config.integrator, [&](int steps) {
    return midpoint_product_full(cavity, config, steps);
  });
}

MatX integrate_cavity_probe_rows(int cavity, const CellConfig& config) {
  validate(config);
  check_cavity_index(cavity);
  return step_doubled(config.integrator, [&](int steps) {
    return midpoint_product_probe_rows(cavity, config, steps);
  });
}

GaussianChannel reduce_channel(const Eigen::Ref<const MatX>& s) {
  if (s.rows() < 2 || s.cols() < 2 || s.cols() % 2 != 0) {
    throw std::invalid_argument("reduce_channel needs at least the two probe rows");
  }
  GaussianChannel ch;
  ch.t_matrix = s.block<2, 2>(0, 0);
  const auto coupling = s.block(0, 2, 2, s.cols() - 2);
  ch.r_matrix = coupling * coupling.transpose();
  return ch;
}

GaussianChannel compose_cell(const GaussianChannel& first, const GaussianChannel& second,
                             double theta) {
  const Mat2 rot = rotation_matrix(2.0 * theta);
  GaussianChannel cell;
  cell.t_matrix = rot * second.t_matrix * first.t_matrix;
  const Mat2 inner = second.t_matrix * first.r_matrix * second.t_matrix.transpose() +
                     second.r_matrix;
  cell.r_matrix = rot * inner * rot.transpose();
  cell.r_matrix = 0.5 * (cell.r_matrix + cell.r_matrix.transpose()).eval();
  return cell;
}

GaussianChannel cell_channel(const CellConfig& config) {
  const double theta = cell_kinematics(config.a0).theta(config.omega0);
  const GaussianChannel first = reduce_channel(integrate_cavity_probe_rows(1, config));
  const GaussianChannel second = reduce_channel(integrate_cavity_probe_rows(2, config));
  return compose_cell(first, second, theta);
}

CheckedCellChannel cell_channel_checked(const CellConfig& config) {
  const double theta = cell_kinematics(config.a0).theta(config.omega0);
  const MatX s1 = integrate_cavity(1, config);
  const MatX s2 = integrate_cavity(2, config);
  CheckedCellChannel out;
  out.channel = compose_cell(reduce_channel(s1), reduce_channel(s2), theta);
  out.symplectic_defect_1 = check_symplectic(s1);
  out.symplectic_defect_2 = check_symplectic(s2);
  return out;
}

double complete_positivity_margin(const GaussianChannel& channel) {
  // T Omega T^T = det(T) Omega for 2x2 T.
  const double kappa = 1.0 - channel.t_matrix.determinant();
  const Mat2& r = channel.r_matrix;
  const double mean = 0.5 * (r(0, 0) + r(1, 1));
  const double off = 0.5 * (r(0, 1) + r(1, 0));
  const double half_diff = 0.5 * (r(0, 0) - r(1, 1));
  return mean - std::sqrt(half_diff * half_diff + off * off + kappa * kappa);
}

}  // namespace unruh
