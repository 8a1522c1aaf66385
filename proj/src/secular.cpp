#include "specdist/secular.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace specdist {

namespace {

struct Secular {
  const std::vector<double>& d;  // distinct node values, ascending
  const std::vector<double>& w;  // aggregated weights per node
  double rho;

  double value(double x) const {
    double s = 0.0;
    for (size_t k = 0; k < d.size(); ++k) s += w[k] / (d[k] - x);
    return 1.0 - rho * s;
  }
  double derivative(double x) const {
    double s = 0.0;
    for (size_t k = 0; k < d.size(); ++k) {
      const double t = d[k] - x;
      s += w[k] / (t * t);
    }
    return -rho * s;
  }
};

// Root in (lo, hi) with f(lo) >= 0 > f(hi): bisection to a tight bracket,
// then two Newton polish steps kept inside the bracket.
double solve_in_bracket(const Secular& f, double lo, double hi) {
  const double width = hi - lo;
  double a = lo, b = hi;
  while (b - a > 1e-13 * width) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;  // ran out of doubles
    if (f.value(mid) >= 0.0)
      a = mid;
    else
      b = mid;
  }
  double x = 0.5 * (a + b);
  for (int it = 0; it < 2; ++it) {
    const double fx = f.value(x);
    const double dfx = f.derivative(x);
    if (dfx == 0.0) break;
    const double next = x - fx / dfx;
    if (next <= a || next >= b) break;
    x = next;
  }
  return x;
}

}  // namespace

Vector secular_rank_one_eigenvalues(const Vector& lambda, double rho) {
  const Eigen::Index p = lambda.size();
  if (p < 1) throw_invalid("secular: empty spectrum");
  if (!(rho > 0.0)) throw_invalid("secular: rho must be positive");
  if (lambda(0) <= 0.0) throw_invalid("secular: eigenvalues must be strictly positive");
  for (Eigen::Index i = 1; i < p; ++i)
    if (lambda(i) < lambda(i - 1)) throw_invalid("secular: eigenvalues not sorted");
  const double rp = rho * static_cast<double>(p);
  if (rp > 1.0 + 1e-9)
    throw_regime("secular: rho * p > 1 violates the p < n sampling regime");

  // Deflation: group values equal within relative duplicate_rel. A group of
  // size m keeps its value m-1 times among the roots and enters the secular
  // equation once with aggregated weight.
  std::vector<double> d, w;
  std::vector<double> roots;
  roots.reserve(p);
  Eigen::Index i = 0;
  while (i < p) {
    Eigen::Index j = i + 1;
    while (j < p && lambda(j) - lambda(i) <= Tolerances::duplicate_rel * lambda(j)) ++j;
    double sum = 0.0;
    for (Eigen::Index k = i; k < j; ++k) sum += lambda(k);
    d.push_back(lambda(i));
    w.push_back(sum);
    for (Eigen::Index k = i; k + 1 < j; ++k) roots.push_back(lambda(i));
    i = j;
  }

  Secular f{d, w, rho};
  // First root lies in [0, d_0); f(0) = 1 - rho*p >= 0 up to roundoff.
  roots.push_back(solve_in_bracket(f, 0.0, d[0]));
  for (size_t k = 1; k < d.size(); ++k)
    roots.push_back(solve_in_bracket(f, d[k - 1], d[k]));

  std::sort(roots.begin(), roots.end());
  Vector out(p);
  for (Eigen::Index k = 0; k < p; ++k) out(k) = roots[k];
  return out;
}

}  // namespace specdist
