#ifndef SPECDIST_QUADRATURE_HPP
#define SPECDIST_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "specdist/errors.hpp"

namespace specdist {

struct QuadratureResult {
  double value = 0.0;
  int nodes = 0;
  bool converged = false;
};

// Integral of f over (a, b) where f may carry inverse-square-root
// singularities at either endpoint. The substitution
//   x = (a+b)/2 - ((b-a)/2) cos(theta), theta in (0, pi)
// absorbs both; the midpoint rule in theta is then refined by doubling the
// node count until the relative change drops below rel_tol.
// scale_floor guards the relative test for integrands whose value nearly
// cancels: convergence is declared once the step-to-step change is below
// rel_tol * max(|value|, scale_floor).
//
// Near machine precision the step-to-step change stops shrinking and starts
// growing again (endpoint nodes move ever closer to the singularity, where
// rounding noise is amplified). When that turnaround happens while the last
// change was already within 100x of the target, the previous iterate is
// accepted as the roundoff-limited answer.
template <typename F>
QuadratureResult chebyshev_endpoint_integrate(F&& f, double a, double b,
                                              double rel_tol, int n0 = 64,
                                              int n_max = 1 << 14,
                                              double scale_floor = 0.0) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  QuadratureResult res;
  double prev = 0.0;
  double prev_diff = std::numeric_limits<double>::infinity();
  bool have_prev = false;
  for (int n = n0; n <= n_max; n *= 2) {
    const double h = M_PI / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double theta = (i + 0.5) * h;
      const double x = mid - half * std::cos(theta);
      sum += f(x) * std::sin(theta);
    }
    const double value = sum * half * h;
    res.value = value;
    res.nodes = n;
    if (have_prev) {
      const double scale =
          std::max({std::abs(value), std::abs(prev), scale_floor});
      const double diff = std::abs(value - prev);
      if (diff <= rel_tol * scale || scale == 0.0) {
        res.converged = true;
        return res;
      }
      if (diff > prev_diff && prev_diff <= 100.0 * rel_tol * scale) {
        res.value = prev;  // refinement is now adding noise, not accuracy
        res.nodes = n / 2;
        res.converged = true;
        return res;
      }
      prev_diff = diff;
    }
    prev = value;
    have_prev = true;
  }
  return res;
}

}  // namespace specdist

#endif
