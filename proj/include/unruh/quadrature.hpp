#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature of vector-valued
// integrands. Used by the perturbative oracle.

#include <functional>

#include "unruh/phase_space.hpp"

namespace unruh {

using VectorIntegrand = std::function<VecX(double)>;

struct QuadratureResult {
  VecX value;
  double error_estimate;  ///< sum over panels of max-norm |K15 - G7|
  int evaluations;
};

/// Integrates f over [a, b] until the summed error estimate drops below
/// abs_tol. Every call of f must return a vector of the same length.
/// Throws QuadratureFailure when `max_panels` is exhausted or f is not finite.
QuadratureResult integrate_adaptive(const VectorIntegrand& f, double a, double b, double abs_tol,
                                    int max_panels = 4000);

}  // namespace unruh
