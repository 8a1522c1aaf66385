#include <doctest.h>

#include <cmath>
#include <random>

#include "specdist/estimators.hpp"
#include "specdist/models.hpp"

using namespace specdist;

namespace {

Vector random_spectrum(int p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.1, 8.0);
  Vector lam(p);
  for (int i = 0; i < p; ++i) lam(i) = ud(rng);
  std::sort(lam.data(), lam.data() + p);
  return lam;
}

}  // namespace

TEST_CASE("equal-n and nearly-equal-n branches agree") {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 8; ++rep) {
    const int p = 4 + static_cast<int>(rng() % 28);
    const int n = 4 * p + static_cast<int>(rng() % (4 * p));
    const Vector lam = random_spectrum(p, rng);
    const DistanceEstimate eq =
        estimate_sqrt_functional(build_spectrum(lam, n, n));
    const DistanceEstimate uneq =
        estimate_sqrt_functional(build_spectrum(lam, n, n + 1));
    CHECK(eq.diagnostics.branch == "equal-n");
    CHECK(uneq.diagnostics.branch == "unequal-n");
    CHECK(std::abs(eq.value - uneq.value) <= 1e-3 * std::abs(eq.value));
  }
}

TEST_CASE("unequal-n value is symmetric in the sample sizes") {
  std::mt19937_64 rng(103);
  for (int rep = 0; rep < 5; ++rep) {
    const int p = 4 + static_cast<int>(rng() % 20);
    const Vector lam = random_spectrum(p, rng);
    const int n1 = 3 * p, n2 = 7 * p;
    const double a = estimate_sqrt_functional(build_spectrum(lam, n1, n2)).value;
    const double b = estimate_sqrt_functional(build_spectrum(lam, n2, n1)).value;
    CHECK(std::abs(a - b) <= 1e-6 * std::abs(a));
  }
}

TEST_CASE("repeated eigenvalues (deflated intervals) stay consistent") {
  Vector lam(8);
  lam << 0.5, 0.5, 0.5, 2.0, 2.0, 3.0, 3.0, 3.0;
  const int n = 64;
  const double eq = estimate_sqrt_functional(build_spectrum(lam, n, n)).value;
  const double uneq =
      estimate_sqrt_functional(build_spectrum(lam, n, n + 1)).value;
  CHECK(std::isfinite(uneq));
  CHECK(std::abs(eq - uneq) <= 1e-3 * std::abs(eq));
}

TEST_CASE("sqrt functional is consistent on identity populations") {
  // X1, X2 ~ N(0, I_p): the estimator targets (1/p) sum sqrt(lambda(C1 C2)) = 1.
  const CovarianceModel m = CovarianceModel::toeplitz(32, 0.0);
  double acc = 0.0;
  const int trials = 5;
  for (int t = 0; t < trials; ++t) {
    const Matrix X1 = gaussian_samples(m, 256, derive_seed(500, 2 * t));
    const Matrix X2 = gaussian_samples(m, 512, derive_seed(500, 2 * t + 1));
    const Vector lam =
        product_eigenvalues(sample_covariance(X1), sample_covariance(X2));
    acc += estimate_sqrt_functional(build_spectrum(lam, 256, 512)).value;
  }
  CHECK(std::abs(acc / trials - 1.0) < 0.02);
}

TEST_CASE("wasserstein estimate vanishes for equal populations") {
  const CovarianceModel m = CovarianceModel::toeplitz(32, 0.4);
  double acc = 0.0;
  const int trials = 5;
  for (int t = 0; t < trials; ++t) {
    const Matrix X1 = gaussian_samples(m, 256, derive_seed(600, 2 * t));
    const Matrix X2 = gaussian_samples(m, 320, derive_seed(600, 2 * t + 1));
    acc += estimate_wasserstein(X1, X2).value;
  }
  CHECK(std::abs(acc / trials) < 0.02);
}

TEST_CASE("plugin wasserstein is the closed formula on sample covariances") {
  const CovarianceModel m = CovarianceModel::toeplitz(16, 0.3);
  const Matrix X1 = gaussian_samples(m, 64, 1);
  const Matrix X2 = gaussian_samples(m, 96, 2);
  const DistanceEstimate d = plugin_wasserstein(X1, X2);
  const double expect =
      true_wasserstein(sample_covariance(X1), sample_covariance(X2)) / 16.0;
  CHECK(d.value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("plugin frobenius is the sample-covariance distance") {
  const CovarianceModel m = CovarianceModel::toeplitz(12, 0.3);
  const Matrix X1 = gaussian_samples(m, 64, 11);
  const Matrix X2 = gaussian_samples(m, 80, 12);
  const double expect =
      (sample_covariance(X1) - sample_covariance(X2)).squaredNorm() / 12.0;
  CHECK(plugin_frobenius(X1, X2).value ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("debiased frobenius hits the analytic target for diagonal models") {
  // C1 = I_16, C2 = 2 I_16: (1/p)||C1 - C2||_F^2 = 1. The plug-in carries a
  // positive bias of (1/p) sum_i [tr(Ci^2) + tr(Ci)^2] / n_i that the
  // debiased estimate removes.
  const int p = 16, n1 = 128, n2 = 160;
  const CovarianceModel m1 = CovarianceModel::atomic(p, {{1.0, p}}, 1);
  const CovarianceModel m2 = CovarianceModel::atomic(p, {{2.0, p}}, 2);
  double rmt = 0.0, plug = 0.0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    const Matrix X1 = gaussian_samples(m1, n1, derive_seed(700, 2 * t));
    const Matrix X2 = gaussian_samples(m2, n2, derive_seed(700, 2 * t + 1));
    rmt += estimate_frobenius(X1, X2).value;
    plug += plugin_frobenius(X1, X2).value;
  }
  rmt /= trials;
  plug /= trials;
  const double truth = 1.0;
  // (1/p)[tr(Ci^2) + tr(Ci)^2]/n_i with C1 = I, C2 = 2I.
  const double bias = (1.0 + p) / static_cast<double>(n1) +
                      4.0 * (1.0 + p) / static_cast<double>(n2);
  CHECK(std::abs(rmt - truth) < 0.08);
  CHECK(plug - truth > 0.5 * bias);  // plug-in visibly biased upward
  CHECK(std::abs(rmt - truth) < std::abs(plug - truth));
}

TEST_CASE("estimators reject bad shapes and regimes with typed errors") {
  const CovarianceModel m = CovarianceModel::toeplitz(8, 0.2);
  const Matrix X1 = gaussian_samples(m, 32, 1);
  const Matrix bad = gaussian_samples(CovarianceModel::toeplitz(9, 0.2), 32, 1);
  try {
    (void)estimate_wasserstein(X1, bad);
    FAIL_CHECK("expected dimension mismatch error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
  }
  const Matrix tall = gaussian_samples(m, 6, 2);  // p=8 > n=6
  try {
    (void)estimate_wasserstein(X1, tall);
    FAIL_CHECK("expected regime error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::regime);
  }
}

TEST_CASE("diagnostics serialize to JSON") {
  std::mt19937_64 rng(888);
  const Vector lam = random_spectrum(8, rng);
  const DistanceEstimate d =
      estimate_sqrt_functional(build_spectrum(lam, 32, 48));
  const std::string j = d.diagnostics.to_json_text();
  CHECK(j.find("unequal-n") != std::string::npos);
  CHECK(d.diagnostics.intervals == 8);
  CHECK(d.diagnostics.max_quadrature_nodes > 0);
}
