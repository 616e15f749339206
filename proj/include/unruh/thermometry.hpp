#pragma once

// Standard form, temperature and thermality measures of a single-mode
// Gaussian state. The library reports these measures; it never decides
// "thermal" as a boolean.

#include "unruh/channel.hpp"

namespace unruh {

/// sigma = R(theta) diag(nu e^r, nu e^-r) R(theta)^T.
struct StandardForm {
  double nu;     ///< symplectic eigenvalue, >= 1
  double r;      ///< squeezing, >= 0
  double theta;  ///< major-axis angle in [-pi/2, pi/2]
};

/// Throws UnphysicalState when det(sigma) < 1 - 1e-10 or sigma is not
/// positive definite.
StandardForm standard_form(const ProbeState& sigma);

ProbeState from_standard_form(const StandardForm& sf);

/// 1/2 ln((nu + 1)/(nu - 1)); infinite at nu = 1.
double arccoth(double nu);

/// omega0 / (2 arccoth(nu)); zero at nu = 1.
double temperature(double nu, double omega0);

/// Squeezing-to-thermal energy ratio nu (cosh r - 1) / (nu - 1).
/// Throws GroundStateDivergence when nu - 1 < 1e-12 and r > 0.
double delta_measure(double nu, double r);

/// nu^2 r^2 / (2 (nu^2 - 1)^2 arccoth(nu)); leading-order relative gap
/// between the 0-2 and 0-1 EDR temperatures. Same divergence rule as delta.
double epsilon_measure(double nu, double r);

struct FockPopulations {
  double p0, p1, p2;
};

FockPopulations fock_populations(double nu, double r);

/// (m - n) omega0 / ln(pn / pm). Returns 0 when pm <= 0 (ground-state limit);
/// throws PopulationInversion when pm >= pn.
double edr_temperature(int n, int m, double pn, double pm, double omega0);

struct ThermalityReport {
  double t0;
  double delta;
  double epsilon;
  double p0, p1, p2;
  double t_edr_01, t_edr_02, t_edr_12;
};

/// Collects every measure. delta/epsilon are NaN when they diverge and an
/// EDR temperature is NaN when its populations are inverted; neither is an
/// error of the state itself.
ThermalityReport thermality(const StandardForm& sf, double omega0);

}  // namespace unruh
