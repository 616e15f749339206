#include <doctest.h>

#include <cmath>

#include "unruh/errors.hpp"
#include "unruh/oracles.hpp"
#include "unruh/quadrature.hpp"

using namespace unruh;

namespace {

double max_abs(const MatX& m) { return m.cwiseAbs().maxCoeff(); }

CellConfig dyson_config(double lambda0) {
  CellConfig c;
  c.a0 = 1.0;
  c.omega0 = M_PI / 16;
  c.lambda0 = lambda0;
  c.n_modes = 5;
  c.integrator.richardson_tol = 1e-13;
  c.integrator.max_doublings = 12;
  return c;
}

}  // namespace

TEST_CASE("adaptive quadrature") {
  const VectorIntegrand f = [](double x) {
    VecX v(3);
    v << std::sin(x), std::exp(-x * x), std::cos(40 * x);
    return v;
  };
  const QuadratureResult r = integrate_adaptive(f, 0.0, 2.0, 1e-13);
  CHECK(r.value(0) == doctest::Approx(1 - std::cos(2.0)).epsilon(1e-13));
  CHECK(r.value(1) == doctest::Approx(std::sqrt(M_PI) / 2 * std::erf(2.0)).epsilon(1e-13));
  CHECK(r.value(2) == doctest::Approx(std::sin(80.0) / 40).epsilon(1e-11));
  CHECK(r.error_estimate <= 1e-13);
  CHECK(integrate_adaptive(f, 1.0, 1.0, 1e-12).value.isZero());

  const VectorIntegrand singular = [](double x) {
    VecX v(1);
    v << 1.0 / std::sqrt(std::abs(x - 0.3));
    return v;
  };
  CHECK_THROWS_AS(integrate_adaptive(singular, 0.0, 1.0, 1e-14, 50), QuadratureFailure);
  const VectorIntegrand bad = [](double) {
    VecX v(1);
    v << std::nan("");
    return v;
  };
  CHECK_THROWS_AS(integrate_adaptive(bad, 0.0, 1.0, 1e-12), QuadratureFailure);
}

TEST_CASE("perturbative channel") {
  SUBCASE("zero coupling") {
    const GaussianChannel c1 = perturbative_cavity_channel(1, dyson_config(0.0));
    CHECK(c1.t_matrix == Mat2::Identity());
    CHECK(c1.r_matrix == Mat2::Zero());
  }
  SUBCASE("agrees with the symplectic integrator to fourth order") {
    double residual[3];
    const double lambdas[3] = {1e-3, 2e-3, 4e-3};
    for (int k = 0; k < 3; ++k) {
      const CellConfig c = dyson_config(lambdas[k]);
      const GaussianChannel exact = reduce_channel(integrate_cavity_probe_rows(1, c));
      const GaussianChannel pert = perturbative_cavity_channel(1, c);
      residual[k] = max_abs(exact.r_matrix - pert.r_matrix);
      CHECK(residual[k] / (lambdas[k] * lambdas[k]) <= 1e-4);
      CHECK(max_abs(exact.t_matrix - pert.t_matrix) / (lambdas[k] * lambdas[k]) <= 1e-4);
    }
    CHECK(residual[1] / residual[0] == doctest::Approx(16.0).epsilon(0.1));
    CHECK(residual[2] / residual[1] == doctest::Approx(16.0).epsilon(0.1));
  }
  SUBCASE("second cavity and cell") {
    const CellConfig c = dyson_config(1e-3);
    const GaussianChannel exact = reduce_channel(integrate_cavity_probe_rows(2, c));
    const GaussianChannel pert = perturbative_cavity_channel(2, c);
    CHECK(max_abs(exact.r_matrix - pert.r_matrix) / 1e-6 <= 1e-4);
    const GaussianChannel cell = cell_channel(c);
    const GaussianChannel pcell = perturbative_channel(c);
    CHECK(max_abs(cell.r_matrix - pcell.r_matrix) / 1e-6 <= 1e-4);
    CHECK(max_abs(cell.t_matrix - pcell.t_matrix) / 1e-6 <= 1e-4);
  }
  SUBCASE("depends on the coupling only through its square") {
    const GaussianChannel plus = perturbative_cavity_channel(1, dyson_config(3e-3));
    const GaussianChannel minus = perturbative_cavity_channel(1, dyson_config(-3e-3));
    CHECK(plus.r_matrix == minus.r_matrix);
    CHECK(plus.t_matrix == minus.t_matrix);
  }
  CHECK_THROWS_AS(dyson_coefficients(0, dyson_config(1e-3)), std::invalid_argument);
}

TEST_CASE("Fock Hamiltonian") {
  CellConfig base = dyson_config(0.05);
  base.n_modes = 2;
  const FockHamiltonian h(base, 2, 4);
  CHECK(h.dimension() == 125);
  CHECK(h.index({0, 0, 0}) == 0);
  CHECK(h.index({1, 0, 0}) == 1);
  CHECK(h.index({0, 1, 0}) == 5);
  CHECK(h.index({0, 0, 1}) == 25);
  CHECK_THROWS_AS(h.index({5, 0, 0}), std::invalid_argument);

  // Hermiticity: <x|H y> = <H x|y> for random states.
  FockState x(h.dimension()), y(h.dimension()), hx, hy, hy_serial;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = {std::sin(1.0 + i), std::cos(2.0 * i)};
    y[i] = {std::cos(0.5 + 3.0 * i), std::sin(0.7 * i)};
  }
  h.apply(0.6, x, hx);
  h.apply(0.6, y, hy);
  h.apply_serial(0.6, y, hy_serial);
  std::complex<double> a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    a += std::conj(x[i]) * hy[i];
    b += std::conj(hx[i]) * y[i];
    CHECK(hy[i] == hy_serial[i]);
  }
  CHECK(std::abs(a - b) < 1e-14);
}

TEST_CASE("Fock oracle") {
  FockConfig fc;
  fc.n_modes = 2;
  fc.fock_cutoff = 8;
  fc.base = dyson_config(0.05);
  fc.base.n_modes = 2;

  const FockResult r = fock_truncated_evolution(fc);
  const GaussianChannel g = reduce_channel(integrate_cavity_probe_rows(1, fc.base));
  const Mat2 expected = g.t_matrix * g.t_matrix.transpose() + g.r_matrix;
  CHECK(max_abs(r.sigma - expected) <= 1e-3);
  CHECK(max_abs(r.sigma - expected) <= 1e-9);
  CHECK(r.max_norm_drift <= 1e-9);

  SUBCASE("serial and parallel runs agree") {
    const FockRun s = fock_evolve(fc, 6, false);
    const FockRun p = fock_evolve(fc, 6, true);
    CHECK(max_abs(s.sigma - p.sigma) == 0.0);
  }
  SUBCASE("free evolution keeps the vacuum") {
    FockConfig z = fc;
    z.base.lambda0 = 0.0;
    CHECK(max_abs(fock_truncated_evolution(z).sigma - Mat2::Identity()) == 0.0);
  }
  SUBCASE("strong coupling needs more levels") {
    FockConfig strong = fc;
    strong.fock_cutoff = 2;
    strong.base.lambda0 = 1.5;
    strong.base.a0 = 3.0;
    CHECK_THROWS_AS(fock_truncated_evolution(strong), CutoffNotConverged);
  }
  SUBCASE("bounds") {
    FockConfig bad = fc;
    bad.n_modes = 4;
    CHECK_THROWS_AS(fock_truncated_evolution(bad), std::invalid_argument);
    bad = fc;
    bad.fock_cutoff = 11;
    CHECK_THROWS_AS(fock_truncated_evolution(bad), std::invalid_argument);
    bad = fc;
    bad.n_modes = 3;
    bad.fock_cutoff = 10;  // doubled space would hold 21^4 states
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  }
}
