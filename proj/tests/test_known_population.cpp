#include <doctest.h>

#include <cmath>
#include <random>

#include "specdist/estimators.hpp"
#include "specdist/known_population.hpp"
#include "specdist/models.hpp"

using namespace specdist;

namespace {

Matrix random_spd(int p, unsigned seed, double shift = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Matrix A(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) A(i, j) = nd(rng);
  return symmetrize(A * A.transpose() / p) + shift * Matrix::Identity(p, p);
}

}  // namespace

TEST_CASE("identity M reduces to the sample-covariance spectrum") {
  const CovarianceModel m = CovarianceModel::toeplitz(12, 0.3);
  const Matrix X2 = gaussian_samples(m, 60, 5);
  const KnownPopulationModel km =
      build_known_model(Matrix::Identity(12, 12), X2);
  const Vector ev = sym_eig(sample_covariance(X2)).values;
  for (int i = 0; i < 12; ++i)
    CHECK(km.lambda(i) == doctest::Approx(ev(i)).epsilon(1e-10));
  CHECK(km.c2 == doctest::Approx(12.0 / 60.0));
  for (int i = 0; i < 12; ++i) {
    CHECK(km.xi(i) <= km.lambda(i));
    if (i > 0) CHECK(km.xi(i) >= km.lambda(i - 1));
  }
}

TEST_CASE("estimate is consistent when M equals the population") {
  // M = C: the target is (1/p) sum sqrt(lambda(C^2)) = (1/p) tr C = 1.
  const CovarianceModel m = CovarianceModel::toeplitz(32, 0.5);
  const Matrix C = realize_model(m);
  double acc = 0.0;
  const int trials = 4;
  for (int t = 0; t < trials; ++t) {
    const Matrix X2 = gaussian_samples(m, 256, derive_seed(40, t));
    acc += estimate_sqrt_known(build_known_model(C, X2));
  }
  CHECK(std::abs(acc / trials - 1.0) < 0.015);
}

TEST_CASE("two-sample estimator converges to the known-population one") {
  // Unit-scale version of the n1 >> n2 limit: with n1 = 100 * n2 the
  // two-sample value should sit within 2% of the one-sample value.
  const CovarianceModel m = CovarianceModel::toeplitz(16, 0.4);
  const Matrix C = realize_model(m);
  const int n2 = 96, n1 = 100 * n2;
  double two = 0.0, one = 0.0;
  const int trials = 4;
  for (int t = 0; t < trials; ++t) {
    const Matrix X1 = gaussian_samples(m, n1, derive_seed(41, 2 * t));
    const Matrix X2 = gaussian_samples(m, n2, derive_seed(41, 2 * t + 1));
    const Vector lam =
        product_eigenvalues(sample_covariance(X1), sample_covariance(X2));
    two += estimate_sqrt_functional(build_spectrum(lam, n1, n2)).value;
    one += estimate_sqrt_known(build_known_model(C, X2));
  }
  CHECK(std::abs(two - one) <= 0.02 * std::abs(one));
}

TEST_CASE("p > n2 violates the sampling regime") {
  Vector lam(4);
  lam << 1, 2, 3, 4;
  CHECK_THROWS_AS((void)build_known_model_from_lambda(lam, 3), Error);
  try {
    (void)build_known_model_from_lambda(lam, 3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::regime);
  }
}

TEST_CASE("gradient matches finite differences of the objective") {
  const int p = 5, n2 = 50;
  const CovarianceModel m = CovarianceModel::toeplitz(p, 0.4);
  const Matrix X2 = gaussian_samples(m, n2, 2718);
  const CovarianceFitProblem prob(X2);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 4; ++rep) {
    const Matrix M = random_spd(p, 100 + rep, 0.8);
    Matrix D(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) D(i, j) = nd(rng);
    D = symmetrize(D);
    D /= D.norm();
    const Matrix G = prob.gradient(M);
    const Matrix Minv = M.inverse();
    // G is the gradient in the affine-invariant metric; the directional
    // derivative of h is tr(M^-1 G M^-1 D).
    const double analytic = (symmetrize(Minv * G * Minv) * D).trace();
    const double eps = 1e-4;
    const double fd = (prob.objective(M + eps * D) -
                       prob.objective(M - eps * D)) /
                      (2.0 * eps);
    CHECK(std::abs(analytic - fd) <= 1e-3 * std::max(std::abs(fd), 1e-8));
  }
}

TEST_CASE("descent decreases the objective monotonically to convergence") {
  const int p = 10, n2 = 80;
  const CovarianceModel m = CovarianceModel::toeplitz(p, 0.5);
  const Matrix X2 = gaussian_samples(m, n2, 99);
  const FitResult r = fit_covariance(X2);
  REQUIRE(!r.trace.empty());
  for (size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].h_value <= r.trace[i - 1].h_value);
  CHECK(r.trace.back().h_value < r.trace.front().h_value);
  CHECK(r.converged);
  const Vector ev = sym_eig(r.M).values;
  CHECK(ev(0) > 0.0);  // iterate stayed SPD
  CHECK((r.M - r.M.transpose()).norm() < 1e-10);
}

TEST_CASE("fit drives the estimated residual to zero and stays SPD") {
  const int p = 20, n2 = 200;
  const CovarianceModel m = CovarianceModel::toeplitz(p, 0.5);
  const Matrix X2 = gaussian_samples(m, n2, 12);
  const CovarianceFitProblem prob(X2);
  const FitResult r = prob.fit(linear_shrinkage_init(X2));
  CHECK(r.converged);
  CHECK(r.trace.back().h_value < 1e-10);
  CHECK(prob.objective(r.M) == doctest::Approx(r.trace.back().h_value));
  CHECK(sym_eig(r.M).values(0) > 0.0);
  // The optimizer matches the residual scalar; it does not (and cannot)
  // reduce every norm of the estimation error, so no claim is tested here
  // about the true distance to the population covariance.
}

TEST_CASE("linear shrinkage init keeps trace and positive definiteness") {
  const CovarianceModel m = CovarianceModel::toeplitz(16, 0.6);
  const Matrix X2 = gaussian_samples(m, 48, 77);
  const Matrix chat = sample_covariance(X2);
  const Matrix M0 = linear_shrinkage_init(X2);
  CHECK(M0.trace() == doctest::Approx(chat.trace()).epsilon(1e-12));
  CHECK(sym_eig(M0).values(0) > 0.0);
  // Shrinkage pulls toward mu * I: spread of eigenvalues cannot grow.
  const Vector e0 = sym_eig(chat).values;
  const Vector e1 = sym_eig(M0).values;
  CHECK(e1(15) - e1(0) <= e0(15) - e0(0) + 1e-12);
}

TEST_CASE("shrinkage falls back to the sample covariance when already spherical") {
  // Columns chosen so C_hat is exactly mu * I: the dispersion d^2 is zero
  // and the initializer must return C_hat unchanged.
  const int p = 4, n = 8;
  Matrix X = Matrix::Zero(p, n);
  for (int k = 0; k < n; ++k) X(k % p, k) = std::sqrt(2.0);
  const Matrix M0 = linear_shrinkage_init(X);
  CHECK((M0 - sample_covariance(X)).norm() == 0.0);
}
