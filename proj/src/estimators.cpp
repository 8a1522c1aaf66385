#include "specdist/estimators.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "specdist/quadrature.hpp"

namespace specdist {

std::string EstimateDiagnostics::to_json_text() const {
  nlohmann::json j;
  j["branch"] = branch;
  j["max_quadrature_nodes"] = max_quadrature_nodes;
  j["intervals"] = intervals;
  j["warnings"] = warnings;
  return j.dump();
}

namespace {

void validate_samples(const Matrix& X1, const Matrix& X2) {
  if (X1.rows() != X2.rows())
    throw_invalid("estimator: sample matrices have different dimensions p");
  if (!X1.allFinite() || !X2.allFinite())
    throw_invalid("estimator: non-finite entries in sample matrix");
}

void require_regime(const Matrix& X1, const Matrix& X2) {
  const Eigen::Index p = X1.rows();
  if (p >= X1.cols() || p >= X2.cols())
    throw_regime("estimator: requires p < n for both sample sets (growth-rate assumption)");
}

}  // namespace

DistanceEstimate estimate_sqrt_functional(const ProductSpectrum& s) {
  DistanceEstimate est;
  est.method = "rmt-sqrt-functional";
  est.diagnostics.intervals = s.p;

  const double p = static_cast<double>(s.p);
  if (s.n1 == s.n2) {
    est.diagnostics.branch = "equal-n";
    est.value = 2.0 * s.n1 / p * (s.lambda.cwiseSqrt() - s.xi.cwiseSqrt()).sum();
    return est;
  }

  est.diagnostics.branch = "unequal-n";
  // Leading term of the unequal-n branch.
  double value = 2.0 * std::sqrt(static_cast<double>(s.n1) * s.n2) / p *
                 s.lambda.cwiseSqrt().sum();
  const double coeff = 2.0 * s.n2 / (M_PI * p);
  const double degenerate_term = 2.0 * std::sqrt(static_cast<double>(s.n1) * s.n2) / p;

  for (int j = 0; j < s.p; ++j) {
    const double a = s.xi(j);
    const double b = s.eta(j);
    if (std::abs(b - a) < 1e-6 * s.lambda(j)) {
      // Collapsed interval: the integral reduces to its equal-n limit. Below
      // this width the deviation from the limit is beyond double precision:
      // quadrature nodes sit within rounding distance of the endpoint roots
      // and only amplify cancellation noise. Clustered sample eigenvalues
      // squeeze the enclosed root pair together and routinely produce such
      // intervals.
      value -= degenerate_term * std::sqrt(a);
      continue;
    }
    auto integrand = [&](double x) {
      PhiPsi v;
      try {
        v = phi_psi(s, x);
      } catch (const Error&) {
        // On very narrow intervals the innermost quadrature nodes can land
        // within rounding distance of the endpoint roots. The integrand is
        // an integrable inverse-sqrt spike there and the node weight is
        // O(1/n^2), so dropping the node is below the convergence target.
        return 0.0;
      }
      double ratio = -v.phi / v.psi;
      if (ratio < 0.0) ratio = 0.0;  // roundoff below the branch point
      return std::sqrt(ratio) * v.dpsi;
    };
    // The interval runs between the two secular roots regardless of which
    // sample size is larger; the integral is always taken left to right.
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    // As the interval shrinks its integral approaches the collapsed-interval
    // limit above; anchoring the relative convergence test there keeps very
    // narrow intervals from chasing digits that cannot affect the total.
    const double interval_scale = degenerate_term * std::sqrt(a) / coeff;
    QuadratureResult q = chebyshev_endpoint_integrate(
        integrand, lo, hi, Tolerances::quad_rel, 64, 1 << 14, interval_scale);
    if (!q.converged)
      throw_numeric("estimate_sqrt_functional: quadrature failed to converge on interval " +
                    std::to_string(j));
    est.diagnostics.max_quadrature_nodes =
        std::max(est.diagnostics.max_quadrature_nodes, q.nodes);
    value += coeff * q.value;
  }
  est.value = value;
  return est;
}

DistanceEstimate estimate_wasserstein(const Matrix& X1, const Matrix& X2) {
  validate_samples(X1, X2);
  require_regime(X1, X2);
  const Matrix C1 = sample_covariance(X1);
  const Matrix C2 = sample_covariance(X2);
  const Vector lambda = product_eigenvalues(C1, C2);
  const ProductSpectrum s =
      build_spectrum(lambda, static_cast<int>(X1.cols()), static_cast<int>(X2.cols()));
  DistanceEstimate d = estimate_sqrt_functional(s);
  d.method = "rmt-wasserstein";
  d.value = (C1.trace() + C2.trace()) / static_cast<double>(X1.rows()) - 2.0 * d.value;
  return d;
}

DistanceEstimate plugin_wasserstein(const Matrix& X1, const Matrix& X2) {
  validate_samples(X1, X2);
  DistanceEstimate d;
  d.method = "plugin-wasserstein";
  const Matrix C1 = sample_covariance(X1);
  const Matrix C2 = sample_covariance(X2);
  d.value = true_wasserstein(C1, C2) / static_cast<double>(X1.rows());
  return d;
}

DistanceEstimate estimate_frobenius(const Matrix& X1, const Matrix& X2) {
  validate_samples(X1, X2);
  const double p = static_cast<double>(X1.rows());
  const double n1 = static_cast<double>(X1.cols());
  const double n2 = static_cast<double>(X2.cols());
  const Matrix C1 = sample_covariance(X1);
  const Matrix C2 = sample_covariance(X2);
  const double t1 = C1.trace() / p;
  const double t2 = C2.trace() / p;
  DistanceEstimate d;
  d.method = "rmt-frobenius";
  d.value = (C1.squaredNorm() + C2.squaredNorm()) / p - (p / n1) * t1 * t1 -
            (p / n2) * t2 * t2 - 2.0 * (C1 * C2).trace() / p;
  return d;
}

DistanceEstimate plugin_frobenius(const Matrix& X1, const Matrix& X2) {
  validate_samples(X1, X2);
  DistanceEstimate d;
  d.method = "plugin-frobenius";
  d.value = true_frobenius_sq(sample_covariance(X1), sample_covariance(X2)) /
            static_cast<double>(X1.rows());
  return d;
}

}  // namespace specdist
