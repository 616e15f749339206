// Acceptance run: one PASS/FAIL line per criterion on stdout, exit status 1 if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "unruh/oracles.hpp"
#include "unruh/sweep.hpp"

namespace {

using namespace unruh;

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s  %2d  %-34s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

CellConfig cell(double a0, double omega0, double lambda0 = 0.01, int n_modes = 20) {
  CellConfig c;
  c.a0 = a0;
  c.omega0 = omega0;
  c.lambda0 = lambda0;
  c.n_modes = n_modes;
  return c;
}

// Slope column of a single-omega0 sweep over `a0`.
std::vector<double> slopes(const std::vector<double>& a0, double omega0, double lambda0 = 0.01) {
  SweepGrid g;
  g.a0_values = a0;
  g.omega0_values = {omega0};
  g.lambda0 = lambda0;
  SweepTable t = run_sweep(g);
  temperature_slope(t);
  std::vector<double> s;
  for (const PointResult& p : t.points) s.push_back(p.dT0_da0);
  return s;
}

void unruh_slope() {
  const std::vector<double> a0 = log_space(1.0, 10.0, 15);
  const std::vector<double> s = slopes(a0, kPi / 16.0);
  // central differences exist at interior nodes only
  bool pass = true;
  double lo = INFINITY, hi = -INFINITY;
  std::size_t worst = 1;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const bool in = s[i] >= 0.45 && s[i] <= 0.55;
    pass = pass && in;
    if (!in && (worst == 1 || std::abs(s[i] - 0.5) > std::abs(s[worst] - 0.5))) worst = i;
    lo = std::min(lo, s[i]);
    hi = std::max(hi, s[i]);
  }
  report(1, "unruh slope", pass,
         fmt("dT0/da0 in [%.4f, %.4f] over 13 interior nodes; bound [0.45, 0.55]%s", lo, hi,
             pass ? "" : fmt("; worst %.4f at a0 = %.4g", s[worst], a0[worst]).c_str()));
}

void gap_independence() {
  const double q = std::pow(10.0, 1.0 / 14.0);
  const std::vector<double> a0 = {10.0 / q, 10.0, 10.0 * q};
  const double omegas[] = {kPi / 32.0, kPi / 16.0, kPi / 8.0, kPi / 4.0};
  std::vector<double> s;
  for (double w : omegas) s.push_back(slopes(a0, w)[1]);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      worst = std::max(worst, std::abs(s[i] - s[j]) / std::abs(s[j]));
  if (!std::isfinite(worst)) worst = INFINITY;
  report(2, "gap independence", worst <= 0.05,
         fmt("slopes at a0 = 10: %.4f %.4f %.4f %.4f; worst pairwise %.3g%% (bound 5%%)", s[0], s[1],
             s[2], s[3], 100.0 * worst));
}

void thermality_check(const SweepTable& sweep) {
  const PointResult p = run_point(cell(10.0, kPi / 16.0));
  const double delta = p.thermality.delta;
  const double eps = p.thermality.epsilon;

  // Unruh-regime box a0 in [1, 10], omega0 in [pi/32, pi/4], sampled at the
  // default sweep nodes; the full default box is reported alongside.
  double r_box = 0, nu_box = 0, r_all = 0, nu_all = 0;
  int in_box = 0;
  bool all_finite = true;
  for (const PointResult& q : sweep.points) {
    if (!q.ok()) continue;
    const double r = q.standard_form.r, nu1 = q.standard_form.nu - 1.0;
    r_all = std::max(r_all, r);
    nu_all = std::max(nu_all, nu1);
    if (q.a0 >= 1.0 && q.a0 <= 10.0 && q.omega0 >= kPi / 32.0 * (1 - 1e-12) &&
        q.omega0 <= kPi / 4.0 * (1 + 1e-12)) {
      ++in_box;
      all_finite = all_finite && std::isfinite(r) && std::isfinite(nu1);
      r_box = std::max(r_box, r);
      nu_box = std::max(nu_box, nu1);
    }
  }
  const bool pass = delta <= 1e-5 && eps <= 1e-5 && in_box > 0 && all_finite && r_box <= 1e-3 &&
                    nu_box <= 1e2;
  report(3, "thermality in the unruh regime", pass,
         fmt("delta %.3g, eps %.3g at (10, pi/16); box a0 [1,10] x omega0 [pi/32,pi/4] (%d nodes): "
             "max r %.3g, max nu-1 %.4g; full default box: max r %.3g, max nu-1 %.4g",
             delta, eps, in_box, r_box, nu_box, r_all, nu_all));
}

void mode_convergence_check(const SweepGrid& grid) {
  std::vector<double> a0;
  for (double a : grid.a0_values)
    if (a < 6.0) a0.push_back(a);
  a0.push_back(6.0);
  const ModeConvergence mc = mode_convergence(a0, kPi / 16.0, 0.01, {20, 210});
  double worst = 0.0, at = kNaN;
  bool finite = true;
  for (std::size_t i = 0; i < a0.size(); ++i) {
    const double ref = mc.curves[1].t0[i];
    const double rel = std::abs(mc.curves[0].t0[i] - ref) / ref;
    if (!std::isfinite(rel)) {
      finite = false;
      continue;
    }
    if (rel > worst) {
      worst = rel;
      at = a0[i];
    }
  }
  report(4, "mode convergence", finite && worst <= 0.01,
         fmt("%zu a0 nodes in [0.01, 6]; worst |T0(20)-T0(210)|/T0(210) = %.3g%% at a0 = %.4g%s",
             a0.size(), 100.0 * worst, at, finite ? "" : "; non-finite T0 present"));
}

void coupling_independence() {
  const double t1 = run_point(cell(10.0, kPi / 16.0, 0.01)).thermality.t0;
  const double t2 = run_point(cell(10.0, kPi / 16.0, 0.005)).thermality.t0;
  const double rel = std::abs(t1 - t2) / t1;
  report(5, "coupling independence", rel < 0.01,
         fmt("T0 = %.8g (lambda0 0.01), %.8g (0.005); change %.3g%%", t1, t2, 100.0 * rel));
}

void unit_conversion() {
  const double g1 = physical_units(1.0, 0.25, kPi / 16.0).acceleration_g;
  const double g2 = physical_units(4000.0, 0.25, kPi / 16.0).acceleration_g;
  const double e1 = std::abs(g1 / 2.3e15 - 1.0), e2 = std::abs(g2 / 5.7e11 - 1.0);
  report(6, "unit conversion", e1 <= 0.05 && e2 <= 0.05,
         fmt("L = 1 m: %.4g g (%.2g%% off 2.3e15); L = 4 km: %.4g g (%.2g%% off 5.7e11)", g1,
             100.0 * e1, g2, 100.0 * e2));
}

void symplecticity(const SweepTable& sweep) {
  double worst = 0.0;
  int missing = 0;
  for (const PointResult& p : sweep.points) {
    if (std::isfinite(p.symplectic_defect))
      worst = std::max(worst, p.symplectic_defect);
    else
      ++missing;
  }
  report(7, "symplecticity", missing == 0 && worst <= 1e-9,
         fmt("%zu points, max ||S J S^T - J||_max = %.3g (bound 1e-9)%s", sweep.points.size(), worst,
             missing ? fmt("; %d points without a defect", missing).c_str() : ""));
}

struct SampledChannel {
  CellConfig config;
  GaussianChannel channel;
};

std::vector<SampledChannel> random_sample() {
  // a0 and omega0 log-uniform over the Unruh-regime box; lambda0 large enough
  // that 1e4 iterations contract well below 1e-8.
  std::mt19937 rng(20240611u);
  std::uniform_real_distribution<double> la(std::log(1.0), std::log(10.0));
  std::uniform_real_distribution<double> lw(std::log(kPi / 32.0), std::log(kPi / 4.0));
  std::uniform_real_distribution<double> lam(0.5, 1.0);
  std::vector<SampledChannel> out;
  for (int k = 0; k < 10; ++k) {
    const double a0 = std::exp(la(rng));
    const double w = std::exp(lw(rng));
    const double l = lam(rng);
    const CellConfig c = cell(a0, w, l);
    out.push_back({c, cell_channel(c)});
  }
  return out;
}

void triple_agreement(const std::vector<SampledChannel>& sample) {
  double direct = 0.0, iter = 0.0, min_gap = INFINITY, contraction = 0.0;
  for (const SampledChannel& s : sample) {
    const ProbeState linear = fixed_point(s.channel);
    const ProbeState spectral = fixed_point_from_spectrum(s.channel);
    const ProbeState iterated = iterate_channel(s.channel, ProbeState::Identity(), 10000);
    direct = std::max(direct, max_abs(linear - spectral));
    iter = std::max({iter, max_abs(linear - iterated), max_abs(spectral - iterated)});
    const double gap = spectral_gap(s.channel);
    min_gap = std::min(min_gap, gap);
    // distance left after 1e4 steps from the identity, to leading order
    contraction = std::max(contraction, std::pow(1.0 - gap, 10000.0) *
                                            max_abs(linear - ProbeState::Identity()));
  }
  const double worst = std::max(direct, iter);
  report(8, "fixed-point triple agreement", worst <= 1e-8,
         fmt("10 seeded configs, a0 [1,10], omega0 [pi/32,pi/4], lambda0 [0.5,1]; max pairwise "
             "%.3g (bound 1e-8): linear vs eigenvector %.3g, vs iteration %.3g; smallest gap %.3g, "
             "contraction estimate %.3g",
             worst, direct, iter, min_gap, contraction));
}

void interpolation_exactness(const std::vector<SampledChannel>& sample) {
  std::vector<SampledChannel> channels = sample;
  const CellConfig base = cell(1.0, kPi / 16.0);
  channels.push_back({base, cell_channel(base)});
  const ProbeState squeezed = from_standard_form({3.0, 0.4, 0.3});
  double worst = 0.0;
  for (const SampledChannel& s : channels) {
    const double dt = 2.0 * cell_kinematics(s.config.a0).tau_max;
    const IcmGenerator gen = icm_generator(s.channel, dt);
    for (const ProbeState& sigma0 : {ProbeState(ProbeState::Identity()), squeezed}) {
      ProbeState discrete = sigma0;
      for (int n = 1; n <= 32; ++n) {
        discrete = apply_channel(s.channel, discrete);
        worst = std::max(worst, max_abs(icm_flow(gen, sigma0, n * dt) - discrete));
      }
    }
  }
  report(9, "interpolation exactness", worst <= 1e-10,
         fmt("%zu channels x 2 initial states, n = 1..32; max deviation %.3g (bound 1e-10)",
             channels.size(), worst));
}

void oracle_equivalence() {
  CellConfig c = cell(1.0, kPi / 16.0, 0.0, 5);
  c.integrator.richardson_tol = 1e-13;
  c.integrator.max_doublings = 12;

  struct Residual {
    double t, r;
  };
  auto residual = [&](double lambda) {
    CellConfig k = c;
    k.lambda0 = lambda;
    const GaussianChannel exact = cell_channel(k);
    const GaussianChannel pert = perturbative_channel(k);
    return Residual{max_abs(exact.t_matrix - pert.t_matrix), max_abs(exact.r_matrix - pert.r_matrix)};
  };
  const Residual d1 = residual(1e-3);
  const double normalized = std::max(d1.t, d1.r) / 1e-6;
  // T's lambda^4 term sits below double rounding at 1e-3, so the scaling is
  // read from R there and from both blocks at couplings where T resolves it.
  const Residual d2 = residual(2e-3);
  const Residual d4 = residual(4e-3);
  const Residual e1 = residual(2e-2);
  const Residual e2 = residual(4e-2);
  const double growth[] = {d2.r / d1.r, d4.r / d2.r, e2.r / e1.r, e2.t / e1.t};
  bool quartic = true;
  for (double g : growth) quartic = quartic && std::abs(g / 16.0 - 1.0) <= 0.15;

  FockConfig fc;
  fc.n_modes = 2;
  fc.fock_cutoff = 8;
  fc.base = cell(1.0, kPi / 16.0, 0.05, 2);
  fc.base.integrator = c.integrator;
  const FockResult fr = fock_truncated_evolution(fc);
  const GaussianChannel g = reduce_channel(integrate_cavity(1, fc.base));
  const double fock = max_abs(fr.sigma - (g.t_matrix * g.t_matrix.transpose() + g.r_matrix));

  report(10, "oracle equivalence", normalized <= 1e-4 && quartic && fock <= 1e-3,
         fmt("dyson residual/lambda0^2 %.3g at 1e-3 (bound 1e-4); residual growth per doubling "
             "R %.2f %.2f %.2f, T %.2f (16 +/- 15%%); fock vs gaussian %.3g (bound 1e-3)",
             normalized, growth[0], growth[1], growth[2], growth[3], fock));
}

void squeezing_bands(const SweepTable& sweep) {
  const std::size_t na = sweep.grid.a0_values.size(), nw = sweep.grid.omega0_values.size();
  int maxima = 0, off_band = 0;
  double off_a0 = kNaN, off_w = kNaN;
  for (std::size_t i = 0; i < na; ++i) {
    const double tau = cell_kinematics(sweep.grid.a0_values[i]).tau_max;
    for (std::size_t j = 1; j + 1 < nw; ++j) {
      const double r = sweep.at(i, j).standard_form.r;
      const double rl = sweep.at(i, j - 1).standard_form.r;
      const double rr = sweep.at(i, j + 1).standard_form.r;
      if (!(std::isfinite(r) && std::isfinite(rl) && std::isfinite(rr))) continue;
      if (!(r > rl && r > rr)) continue;
      ++maxima;
      // some Theta = n pi / 2 (n >= 1) inside [omega_{j-1}, omega_{j+1}]
      const double lo = 2.0 * sweep.grid.omega0_values[j - 1] * tau / kPi;
      const double hi = 2.0 * sweep.grid.omega0_values[j + 1] * tau / kPi;
      const double n = std::max(1.0, std::ceil(lo));
      if (n > hi) {
        ++off_band;
        off_a0 = sweep.grid.a0_values[i];
        off_w = sweep.grid.omega0_values[j];
      }
    }
  }
  report(11, "squeezing bands", maxima > 0 && off_band == 0,
         fmt("%d local maxima of r along omega0, %d off a Theta = n pi/2 line by more than one cell%s",
             maxima, off_band,
             off_band ? fmt(" (last at a0 %.4g, omega0 %.4g)", off_a0, off_w).c_str() : ""));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();

  SweepGrid grid = default_sweep_grid();
  grid.options.check_symplectic = true;
  const SweepTable sweep = run_sweep(grid);

  unruh_slope();
  gap_independence();
  thermality_check(sweep);
  mode_convergence_check(grid);
  coupling_independence();
  unit_conversion();
  symplecticity(sweep);
  const std::vector<SampledChannel> sample = random_sample();
  triple_agreement(sample);
  interpolation_exactness(sample);
  oracle_equivalence();
  squeezing_bands(sweep);

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 11 criteria failed (%.0f s)\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
