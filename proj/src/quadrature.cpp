#include "unruh/quadrature.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "unruh/errors.hpp"

namespace unruh {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the Gauss points.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  VecX value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const VectorIntegrand& f, double a, double b, int& evaluations) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  VecX fc = f(c);
  VecX kron = kWgk[7] * fc;
  VecX gauss = kWg[3] * fc;
  for (int k = 0; k < 7; ++k) {
    const VecX f1 = f(c - h * kXgk[k]);
    const VecX f2 = f(c + h * kXgk[k]);
    if (f1.size() != fc.size() || f2.size() != fc.size()) {
      throw QuadratureFailure("integrand changed its output length");
    }
    kron += kWgk[k] * (f1 + f2);
    if (k % 2 == 1) gauss += kWg[k / 2] * (f1 + f2);
  }
  evaluations += 15;
  Panel p{a, b, h * kron, (h * (kron - gauss)).cwiseAbs().maxCoeff()};
  if (!p.value.allFinite() || !std::isfinite(p.error)) {
    throw QuadratureFailure("non-finite integrand on [" + std::to_string(a) + ", " +
                            std::to_string(b) + "]");
  }
  return p;
}

}  // namespace

QuadratureResult integrate_adaptive(const VectorIntegrand& f, double a, double b, double abs_tol,
                                    int max_panels) {
  QuadratureResult out{};
  if (a == b) {
    out.value = VecX::Zero(f(a).size());
    return out;
  }
  std::priority_queue<Panel> heap;
  Panel first = evaluate(f, a, b, out.evaluations);
  double total_error = first.error;
  heap.push(std::move(first));
  int panels = 1;
  while (total_error > abs_tol) {
    if (panels >= max_panels) {
      throw QuadratureFailure("adaptive quadrature did not reach " + std::to_string(abs_tol) +
                              " within " + std::to_string(max_panels) + " panels (error " +
                              std::to_string(total_error) + ")");
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureFailure("panel width reached machine precision");
    }
    Panel left = evaluate(f, worst.a, mid, out.evaluations);
    Panel right = evaluate(f, mid, worst.b, out.evaluations);
    total_error += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++panels;
  }
  // Sum from scratch to avoid drift in the running totals.
  out.error_estimate = 0.0;
  while (!heap.empty()) {
    const Panel& p = heap.top();
    if (out.value.size() == 0) out.value = VecX::Zero(p.value.size());
    out.value += p.value;
    out.error_estimate += p.error;
    heap.pop();
  }
  return out;
}

}  // namespace unruh
