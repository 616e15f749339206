#include "unruh/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "unruh/errors.hpp"
#include "unruh/quadrature.hpp"

namespace unruh {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Unit-coupling kernel along the world line: probe (cos, sin) and, for every
// mode, 2 sin(n pi x) / sqrt(n pi) times (cos, sin) of n pi t.
struct Kernel {
  Vec2 u;
  std::vector<double> g, c, s;
};

Kernel kernel_at(double tau, const CellConfig& config, int n_modes) {
  const TrajectoryPoint p = trajectory(tau, config);
  Kernel k;
  k.u = Vec2(std::cos(config.omega0 * tau), std::sin(config.omega0 * tau));
  k.g.resize(n_modes);
  k.c.resize(n_modes);
  k.s.resize(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    k.g[n - 1] = 2.0 * std::sin(n * kPi * p.x_local) / std::sqrt(n * kPi);
    k.c[n - 1] = std::cos(n * kPi * p.t_local);
    k.s[n - 1] = std::sin(n * kPi * p.t_local);
  }
  return k;
}

// Per mode: g c u (2 entries) then g s u (2 entries).
VecX smeared(const Kernel& k) {
  const int n_modes = static_cast<int>(k.g.size());
  VecX v(4 * n_modes);
  for (int n = 0; n < n_modes; ++n) {
    v.segment<2>(4 * n) = k.g[n] * k.c[n] * k.u;
    v.segment<2>(4 * n + 2) = k.g[n] * k.s[n] * k.u;
  }
  return v;
}

Mat2 j_matrix() {
  Mat2 j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

Mat2 rot(double theta) {
  Mat2 r;
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return r;
}

CellConfig checked_oracle_config(const CellConfig& config) {
  CellConfig unit = config;
  unit.lambda0 = std::abs(config.lambda0);
  validate(unit);
  unit.lambda0 = 1.0;
  return unit;
}

}  // namespace

DysonCoefficients dyson_coefficients(int cavity, const CellConfig& config, double abs_tol) {
  if (cavity != 1 && cavity != 2) throw std::invalid_argument("cavity index must be 1 or 2");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  const CellConfig unit = checked_oracle_config(config);
  const int n_modes = unit.n_modes;
  const double tau_max = cell_kinematics(unit.a0).tau_max;
  const double lo = cavity == 1 ? 0.0 : tau_max;
  const double hi = cavity == 1 ? tau_max : 2.0 * tau_max;
  const Mat2 j = j_matrix();

  // First order: M_n = int g u v_n^T, stored as the smeared vector.
  const VectorIntegrand single = [&](double tau) { return smeared(kernel_at(tau, unit, n_modes)); };
  const VecX m = integrate_adaptive(single, lo, hi, abs_tol).value;
  Mat2 sum_mm = Mat2::Zero();
  for (int n = 0; n < n_modes; ++n) {
    Mat2 mn;
    mn.col(0) = m.segment<2>(4 * n);
    mn.col(1) = m.segment<2>(4 * n + 2);
    sum_mm += mn * mn.transpose();
  }

  // Second order over the ordered triangle tau1 > tau2, as iterated integrals:
  // the inner one runs from lo to tau1.
  const double inner_tol = 0.1 * abs_tol;
  const VectorIntegrand outer = [&](double tau1) {
    const Kernel k1 = kernel_at(tau1, unit, n_modes);
    const VecX inner = integrate_adaptive(single, lo, tau1, inner_tol).value;
    Vec2 w = Vec2::Zero();
    // sin(phi2 - phi1) = s2 c1 - c2 s1
    for (int n = 0; n < n_modes; ++n) {
      w += k1.g[n] * (k1.c[n] * inner.segment<2>(4 * n + 2) - k1.s[n] * inner.segment<2>(4 * n));
    }
    const Mat2 block = (j * k1.u) * w.transpose();
    VecX out(4);
    out << block(0, 0), block(0, 1), block(1, 0), block(1, 1);
    return out;
  };
  const VecX t = integrate_adaptive(outer, lo, hi, abs_tol).value;

  DysonCoefficients d;
  d.t2 << t(0), t(1), t(2), t(3);
  d.r2 = j * sum_mm * j.transpose();
  d.r2 = 0.5 * (d.r2 + d.r2.transpose()).eval();
  return d;
}

GaussianChannel perturbative_cavity_channel(int cavity, const CellConfig& config, double abs_tol) {
  const DysonCoefficients d = dyson_coefficients(cavity, config, abs_tol);
  const double l2 = config.lambda0 * config.lambda0;
  GaussianChannel ch;
  ch.t_matrix = Mat2::Identity() + l2 * d.t2;
  ch.r_matrix = l2 * d.r2;
  return ch;
}

GaussianChannel perturbative_channel(const CellConfig& config, double abs_tol) {
  const GaussianChannel c1 = perturbative_cavity_channel(1, config, abs_tol);
  const GaussianChannel c2 = perturbative_cavity_channel(2, config, abs_tol);
  // Free probe rotation over both cavities, applied after the interactions.
  const double phase = 2.0 * config.omega0 * cell_kinematics(config.a0).tau_max;
  const Mat2 r = rot(phase);
  GaussianChannel cell;
  cell.t_matrix = r * c2.t_matrix * c1.t_matrix;
  cell.r_matrix = r * (c2.t_matrix * c1.r_matrix * c2.t_matrix.transpose() + c2.r_matrix) *
                  r.transpose();
  return cell;
}

void validate(const FockConfig& config) {
  if (config.n_modes < 1 || config.n_modes > 3) {
    throw std::invalid_argument("Fock oracle supports 1 to 3 field modes");
  }
  if (config.fock_cutoff < 1 || config.fock_cutoff > 10) {
    throw std::invalid_argument("Fock cutoff must lie in [1, 10]");
  }
  if (!(config.ode_tol > 0.0)) throw std::invalid_argument("ode_tol must be positive");
  const double doubled = std::pow(2.0 * config.fock_cutoff + 1.0, config.n_modes + 1);
  if (doubled > 1e5) {
    throw std::invalid_argument("doubled-cutoff space exceeds 1e5 states");
  }
  CellConfig base = config.base;
  base.n_modes = std::max(base.n_modes, config.n_modes);
  validate(base);
}

FockHamiltonian::FockHamiltonian(const CellConfig& base, int n_modes, int cutoff)
    : base_(base), n_modes_(n_modes), cutoff_(cutoff) {
  if (n_modes < 1 || cutoff < 1) throw std::invalid_argument("empty Fock space");
  stride_.resize(n_modes + 1);
  dimension_ = 1;
  for (int k = 0; k <= n_modes; ++k) {
    stride_[k] = dimension_;
    dimension_ *= static_cast<std::size_t>(cutoff + 1);
  }
  sqrt_.resize(cutoff + 2);
  for (int k = 0; k <= cutoff + 1; ++k) sqrt_[k] = std::sqrt(static_cast<double>(k));
}

std::size_t FockHamiltonian::index(const std::vector<int>& occupations) const {
  if (static_cast<int>(occupations.size()) != n_modes_ + 1) {
    throw std::invalid_argument("one occupation per oscillator expected");
  }
  std::size_t idx = 0;
  for (int k = 0; k <= n_modes_; ++k) {
    if (occupations[k] < 0 || occupations[k] > cutoff_) {
      throw std::invalid_argument("occupation outside the truncated basis");
    }
    idx += static_cast<std::size_t>(occupations[k]) * stride_[k];
  }
  return idx;
}

FockHamiltonian::Terms FockHamiltonian::terms_at(double tau) const {
  const TrajectoryPoint p = trajectory(tau, base_);
  const std::complex<double> probe = std::polar(1.0, base_.omega0 * tau);
  Terms t;
  t.c.resize(4 * n_modes_);
  for (int n = 1; n <= n_modes_; ++n) {
    const double kappa = base_.lambda0 * std::sin(n * kPi * p.x_local) / std::sqrt(n * kPi);
    const std::complex<double> field = std::polar(1.0, n * kPi * p.t_local);
    t.c[4 * (n - 1) + 0] = kappa * std::conj(probe) * std::conj(field);  // a a_n
    t.c[4 * (n - 1) + 1] = kappa * std::conj(probe) * field;             // a a_n^dag
    t.c[4 * (n - 1) + 2] = kappa * probe * std::conj(field);             // a^dag a_n
    t.c[4 * (n - 1) + 3] = kappa * probe * field;                        // a^dag a_n^dag
  }
  return t;
}

// Gather form: row m of H collects the four ladder terms of each mode.
void FockHamiltonian::apply_row(std::size_t m, const Terms& terms, const FockState& psi,
                                FockState& out) const {
  const std::size_t base = static_cast<std::size_t>(cutoff_ + 1);
  const int mp = static_cast<int>(m % base);
  std::complex<double> acc = 0.0;
  for (int n = 1; n <= n_modes_; ++n) {
    const int mn = static_cast<int>((m / stride_[n]) % base);
    const std::size_t sp = stride_[0];
    const std::size_t sn = stride_[n];
    const std::complex<double>* c = &terms.c[4 * (n - 1)];
    if (mp < cutoff_ && mn < cutoff_) acc += c[0] * (sqrt_[mp + 1] * sqrt_[mn + 1]) * psi[m + sp + sn];
    if (mp < cutoff_ && mn > 0) acc += c[1] * (sqrt_[mp + 1] * sqrt_[mn]) * psi[m + sp - sn];
    if (mp > 0 && mn < cutoff_) acc += c[2] * (sqrt_[mp] * sqrt_[mn + 1]) * psi[m - sp + sn];
    if (mp > 0 && mn > 0) acc += c[3] * (sqrt_[mp] * sqrt_[mn]) * psi[m - sp - sn];
  }
  out[m] = acc;
}

void FockHamiltonian::apply(double tau, const FockState& psi, FockState& out) const {
  const Terms terms = terms_at(tau);
  out.resize(dimension_);
  const long dim = static_cast<long>(dimension_);
#pragma omp parallel for schedule(static)
  for (long m = 0; m < dim; ++m) apply_row(static_cast<std::size_t>(m), terms, psi, out);
}

void FockHamiltonian::apply_serial(double tau, const FockState& psi, FockState& out) const {
  const Terms terms = terms_at(tau);
  out.resize(dimension_);
  for (std::size_t m = 0; m < dimension_; ++m) apply_row(m, terms, psi, out);
}

FockRun fock_evolve(const FockConfig& config, int cutoff, bool parallel) {
  CellConfig base = config.base;
  base.n_modes = std::max(base.n_modes, config.n_modes);
  const FockHamiltonian h(base, config.n_modes, cutoff);
  const double tau_max = cell_kinematics(base.a0).tau_max;

  FockState psi(h.dimension(), 0.0);
  psi[0] = 1.0;
  FockRun run{};
  run.max_norm_drift = 0.0;

  namespace odeint = boost::numeric::odeint;
  using Stepper = odeint::runge_kutta_dopri5<FockState>;
  const std::complex<double> minus_i(0.0, -1.0);
  auto rhs = [&](const FockState& x, FockState& dxdt, double tau) {
    if (parallel) {
      h.apply(tau, x, dxdt);
    } else {
      h.apply_serial(tau, x, dxdt);
    }
    for (auto& v : dxdt) v *= minus_i;
  };
  auto observer = [&](const FockState& x, double) {
    double norm2 = 0.0;
    for (const auto& v : x) norm2 += std::norm(v);
    run.max_norm_drift = std::max(run.max_norm_drift, std::abs(std::sqrt(norm2) - 1.0));
  };
  run.steps = static_cast<long>(odeint::integrate_adaptive(
      odeint::make_controlled<Stepper>(config.ode_tol, config.ode_tol), rhs, psi, 0.0, tau_max,
      tau_max / 256.0, observer));

  // Second moments of the probe ladder operator.
  const std::size_t levels = static_cast<std::size_t>(cutoff + 1);
  double number = 0.0;
  std::complex<double> a2 = 0.0;
  for (std::size_t m = 0; m < psi.size(); ++m) {
    const std::size_t k = m % levels;
    number += static_cast<double>(k) * std::norm(psi[m]);
    if (k + 2 < levels) {
      a2 += std::conj(psi[m]) * std::sqrt(static_cast<double>((k + 1) * (k + 2))) * psi[m + 2];
    }
  }
  run.sigma(0, 0) = 2.0 * a2.real() + 2.0 * number + 1.0;
  run.sigma(1, 1) = -2.0 * a2.real() + 2.0 * number + 1.0;
  run.sigma(0, 1) = run.sigma(1, 0) = 2.0 * a2.imag();
  return run;
}

FockResult fock_truncated_evolution(const FockConfig& config) {
  validate(config);
  const FockRun coarse = fock_evolve(config, config.fock_cutoff);
  const FockRun fine = fock_evolve(config, 2 * config.fock_cutoff);
  FockResult out;
  out.sigma = coarse.sigma;
  out.cutoff_change = (fine.sigma - coarse.sigma).cwiseAbs().maxCoeff();
  out.max_norm_drift = std::max(coarse.max_norm_drift, fine.max_norm_drift);
  if (!(out.cutoff_change < 10.0 * config.ode_tol)) {
    throw CutoffNotConverged("doubling the Fock cutoff from " + std::to_string(config.fock_cutoff) +
                             " moved the covariance by " + std::to_string(out.cutoff_change));
  }
  return out;
}

}  // namespace unruh
