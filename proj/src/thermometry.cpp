#include "unruh/thermometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "unruh/errors.hpp"

namespace unruh {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGroundStateGuard = 1e-12;
}  // namespace

StandardForm standard_form(const ProbeState& sigma) {
  const double a = sigma(0, 0);
  const double d = sigma(1, 1);
  const double b = 0.5 * (sigma(0, 1) + sigma(1, 0));
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), b);
  const double det = a * d - b * b;
  if (!(det >= 1.0 - 1e-10) || !(mean - radius > 0.0)) {
    throw UnphysicalState("covariance matrix with det " + std::to_string(det) +
                          " violates the uncertainty principle");
  }
  StandardForm sf{};
  sf.nu = std::max(1.0, std::sqrt(det));
  sf.r = std::atanh(radius / mean);
  sf.theta = sf.r < 1e-14 ? 0.0 : -0.5 * std::atan2(2.0 * b, a - d);
  return sf;
}

ProbeState from_standard_form(const StandardForm& sf) {
  const Mat2 rot = rotation_matrix(sf.theta);
  const Mat2 diag = Vec2(sf.nu * std::exp(sf.r), sf.nu * std::exp(-sf.r)).asDiagonal();
  return rot * diag * rot.transpose();
}

double arccoth(double nu) {
  if (nu < 1.0) throw std::invalid_argument("arccoth needs nu >= 1");
  if (nu == 1.0) return std::numeric_limits<double>::infinity();
  return 0.5 * std::log((nu + 1.0) / (nu - 1.0));
}

double temperature(double nu, double omega0) {
  if (nu < 1.0) throw std::invalid_argument("symplectic eigenvalue below 1");
  if (nu == 1.0) return 0.0;
  return omega0 / (2.0 * arccoth(nu));
}

double delta_measure(double nu, double r) {
  if (nu < 1.0 || r < 0.0) throw std::invalid_argument("delta needs nu >= 1 and r >= 0");
  if (r == 0.0) return 0.0;
  if (nu - 1.0 < kGroundStateGuard) {
    throw GroundStateDivergence("delta diverges at the ground state (nu - 1 = " +
                                std::to_string(nu - 1.0) + ")");
  }
  // cosh(r) - 1 = 2 sinh(r/2)^2
  const double s = std::sinh(0.5 * r);
  return nu * 2.0 * s * s / (nu - 1.0);
}

double epsilon_measure(double nu, double r) {
  if (nu < 1.0 || r < 0.0) throw std::invalid_argument("epsilon needs nu >= 1 and r >= 0");
  if (r == 0.0) return 0.0;
  if (nu - 1.0 < kGroundStateGuard) {
    throw GroundStateDivergence("epsilon diverges at the ground state (nu - 1 = " +
                                std::to_string(nu - 1.0) + ")");
  }
  const double nu2m1 = (nu - 1.0) * (nu + 1.0);
  return nu * nu * r * r / (2.0 * nu2m1 * nu2m1 * arccoth(nu));
}

FockPopulations fock_populations(double nu, double r) {
  if (nu < 1.0 || r < 0.0) throw std::invalid_argument("populations need nu >= 1 and r >= 0");
  const double l1 = nu * std::exp(r);
  const double l2 = nu * std::exp(-r);
  const double base = (1.0 + l1) * (1.0 + l2);
  const double root = std::sqrt(base);
  FockPopulations p{};
  p.p0 = 2.0 / root;
  p.p1 = 2.0 * (l1 * l2 - 1.0) / (base * root);
  p.p2 = (2.0 + l1 * l1 + l2 * l2 - 6.0 * l1 * l2 + 2.0 * l1 * l1 * l2 * l2) /
         (base * base * root);
  return p;
}

double edr_temperature(int n, int m, double pn, double pm, double omega0) {
  if (m <= n) throw std::invalid_argument("EDR temperature needs m > n");
  if (pm <= 0.0 && pn > 0.0) return 0.0;
  if (!(pm < pn)) {
    throw PopulationInversion("P_" + std::to_string(m) + " >= P_" + std::to_string(n));
  }
  return (m - n) * omega0 / std::log(pn / pm);
}

ThermalityReport thermality(const StandardForm& sf, double omega0) {
  ThermalityReport rep{};
  rep.t0 = temperature(sf.nu, omega0);
  try {
    rep.delta = delta_measure(sf.nu, sf.r);
  } catch (const GroundStateDivergence&) {
    rep.delta = kNaN;
  }
  try {
    rep.epsilon = epsilon_measure(sf.nu, sf.r);
  } catch (const GroundStateDivergence&) {
    rep.epsilon = kNaN;
  }
  const FockPopulations p = fock_populations(sf.nu, sf.r);
  rep.p0 = p.p0;
  rep.p1 = p.p1;
  rep.p2 = p.p2;
  const auto edr = [&](int n, int m, double pn, double pm) {
    try {
      return edr_temperature(n, m, pn, pm, omega0);
    } catch (const PopulationInversion&) {
      return kNaN;
    }
  };
  rep.t_edr_01 = edr(0, 1, p.p0, p.p1);
  rep.t_edr_02 = edr(0, 2, p.p0, p.p2);
  rep.t_edr_12 = edr(1, 2, p.p1, p.p2);
  return rep;
}

}  // namespace unruh
