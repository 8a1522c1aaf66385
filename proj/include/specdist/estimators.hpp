#ifndef SPECDIST_ESTIMATORS_HPP
#define SPECDIST_ESTIMATORS_HPP

#include <string>
#include <vector>

#include "specdist/spectrum.hpp"

namespace specdist {

struct EstimateDiagnostics {
  std::string branch;          // "equal-n" or "unequal-n" (empty when n/a)
  int max_quadrature_nodes = 0;
  int intervals = 0;
  std::vector<std::string> warnings;

  std::string to_json_text() const;
};

struct DistanceEstimate {
  double value = 0.0;
  std::string method;
  EstimateDiagnostics diagnostics;
};

// Consistent estimate of (1/p) sum_i sqrt(lambda_i(C1 C2)) from the product
// spectrum of the sample covariances. Uses the explicit rank-one form when
// n1 == n2 and the singular-endpoint interval quadrature otherwise.
DistanceEstimate estimate_sqrt_functional(const ProductSpectrum& s);

// Per-dimension Wasserstein estimate:
//   (1/p) tr(C1_hat + C2_hat) - 2 * estimate_sqrt_functional.
DistanceEstimate estimate_wasserstein(const Matrix& X1, const Matrix& X2);

// The classical plug-in: the closed Gaussian formula evaluated on sample
// covariances, divided by p.
DistanceEstimate plugin_wasserstein(const Matrix& X1, const Matrix& X2);

// Debiased per-dimension squared Frobenius distance estimate.
DistanceEstimate estimate_frobenius(const Matrix& X1, const Matrix& X2);

// (1/p) ||C1_hat - C2_hat||_F^2, for comparison.
DistanceEstimate plugin_frobenius(const Matrix& X1, const Matrix& X2);

}  // namespace specdist

#endif
