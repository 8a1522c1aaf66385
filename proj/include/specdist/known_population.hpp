#ifndef SPECDIST_KNOWN_POPULATION_HPP
#define SPECDIST_KNOWN_POPULATION_HPP

#include <vector>

#include "specdist/linalg.hpp"

namespace specdist {

// One-sample specialization: C1 = M is known exactly, only C2 is sampled.
// lambda holds the eigenvalues of M * C2_hat, xi the secular roots for
// rho = 1/n2. Valid for p <= n2 (at p = n2 the smallest root degenerates
// to zero, which the estimator tolerates).
struct KnownPopulationModel {
  Vector lambda;
  Vector xi;
  int p = 0;
  int n2 = 0;
  double c2 = 0.0;
};

KnownPopulationModel build_known_model_from_lambda(const Vector& lambda, int n2);
KnownPopulationModel build_known_model(const Matrix& M, const Matrix& X2);

// Consistent estimate of (1/p) sum_i sqrt(lambda_i(M C2)):
//   (2 / (pi c2)) sum_j integral over (xi_j, lambda_j) of sqrt(m(x)) dx
// where m(x) = -psi(x)/x is positive on each interval.
double estimate_sqrt_known(const KnownPopulationModel& model);

struct DescentOptions {
  double grad_tol = 1e-7;  // Riemannian gradient norm
  double h_tol = 1e-14;    // objective floor (squared residual)
  int max_iterations = 500;
  double armijo = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  int max_halvings = 40;
};

struct DescentState {
  int iteration = 0;
  double h_value = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct FitResult {
  Matrix M;
  std::vector<DescentState> trace;
  bool stalled = false;
  bool converged = false;
};

// Squared-residual objective and its Riemannian gradient for fitting a
// covariance matrix to one sample set. Caches the sample covariance so
// repeated objective/gradient calls only pay for the M-dependent work.
class CovarianceFitProblem {
 public:
  explicit CovarianceFitProblem(const Matrix& X2);

  const Matrix& sample_cov() const { return chat2_; }
  int n2() const { return n2_; }

  // h(M) = [ (1/p) tr(M + C2_hat) - 2 * estimate_sqrt_known(M) ]^2
  double objective(const Matrix& M) const;

  // Riemannian gradient of h under <u,v>_M = tr(M^-1 u M^-1 v).
  Matrix gradient(const Matrix& M) const;

  // Gradient descent with the exponential retraction
  //   M <- M^{1/2} exp(-t M^{-1/2} grad M^{-1/2}) M^{1/2}
  // and Armijo backtracking, starting from init.
  FitResult fit(const Matrix& init, const DescentOptions& opts = {}) const;

 private:
  double residual(const Matrix& M) const;  // signed, h = residual^2

  Matrix chat2_;
  int n2_ = 0;
  int p_ = 0;
};

// Ledoit-Wolf style linear shrinkage M0 = rho*mu*I + (1-rho)*C2_hat.
Matrix linear_shrinkage_init(const Matrix& X2);

// Full pipeline: shrinkage init, then descent.
FitResult fit_covariance(const Matrix& X2, const DescentOptions& opts = {});

}  // namespace specdist

#endif
