#include <doctest.h>

#include <cmath>
#include <random>

#include "specdist/linalg.hpp"

using namespace specdist;

namespace {

Matrix random_spd(int p, unsigned seed, double shift = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Matrix A(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) A(i, j) = nd(rng);
  return symmetrize(A * A.transpose()) + shift * Matrix::Identity(p, p);
}

Matrix toeplitz(int p, double r) {
  Matrix C(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) C(i, j) = std::pow(r, std::abs(i - j));
  return C;
}

}  // namespace

TEST_CASE("sym_eig reconstructs the matrix with ascending eigenvalues") {
  const Matrix M = random_spd(12, 7);
  EigenSystem es = sym_eig(M);
  for (int i = 1; i < 12; ++i) CHECK(es.values(i) >= es.values(i - 1));
  const Matrix R =
      es.vectors * es.values.asDiagonal() * es.vectors.transpose();
  CHECK((R - M).norm() <= 1e-12 * M.norm());
  const Matrix I = es.vectors.transpose() * es.vectors;
  CHECK((I - Matrix::Identity(12, 12)).norm() < 1e-12);
}

TEST_CASE("sample_covariance is (1/n) X X^T") {
  Matrix X(2, 3);
  X << 1, 2, 3, 4, 5, 6;
  const Matrix S = sample_covariance(X);
  Matrix expect = X * X.transpose() / 3.0;
  CHECK((S - expect).norm() < 1e-14);
  CHECK((S - S.transpose()).norm() == 0.0);
}

TEST_CASE("spd_sqrt squares back to the input") {
  const Matrix M = random_spd(10, 3);
  const Matrix R = spd_sqrt(M);
  CHECK((R * R - M).norm() <= 1e-11 * M.norm());
  CHECK((R - R.transpose()).norm() < 1e-12);
}

TEST_CASE("spd_sqrt clamps tiny negative eigenvalues and rejects large ones") {
  // Rank-deficient PSD input: tiny negative roundoff eigenvalues are fine.
  Matrix v = Matrix::Ones(6, 1);
  const Matrix psd = v * v.transpose();
  const Matrix R = spd_sqrt(psd);
  CHECK((R * R - psd).norm() < 1e-10);

  Matrix neg = Matrix::Identity(4, 4);
  neg(0, 0) = -1.0;
  CHECK_THROWS_AS((void)spd_sqrt(neg), Error);
}

TEST_CASE("spd_exp and spd_log are mutual inverses") {
  const Matrix M = random_spd(8, 11);
  const Matrix L = spd_log(M);
  CHECK((spd_exp(L) - M).norm() <= 1e-11 * M.norm());
  const Matrix S = symmetrize(Matrix::Random(8, 8));
  CHECK((spd_log(spd_exp(S)) - S).norm() <= 1e-10 * (1.0 + S.norm()));
  CHECK((spd_exp(Matrix::Zero(5, 5)) - Matrix::Identity(5, 5)).norm() <
        1e-14);
}

TEST_CASE("product_eigenvalues matches a dense nonsymmetric eigensolver") {
  const Matrix A = random_spd(9, 21);
  const Matrix B = random_spd(9, 22);
  const Vector ev = product_eigenvalues(A, B);
  Eigen::EigenSolver<Matrix> solver(A * B);
  Vector dense = solver.eigenvalues().real();
  std::sort(dense.data(), dense.data() + dense.size());
  for (int i = 0; i < 9; ++i) {
    CHECK(ev(i) > 0.0);
    CHECK(std::abs(ev(i) - dense(i)) <= 1e-9 * std::abs(dense(i)));
  }
}

TEST_CASE("product_eigenvalues is symmetric in its arguments") {
  const Matrix A = random_spd(7, 31);
  const Matrix B = random_spd(7, 32);
  const Vector ab = product_eigenvalues(A, B);
  const Vector ba = product_eigenvalues(B, A);
  CHECK((ab - ba).cwiseAbs().maxCoeff() <= 1e-9 * ab.cwiseAbs().maxCoeff());
}

TEST_CASE("product_eigenvalues keeps rank-deficient products finite") {
  Matrix v = Matrix::Zero(5, 1);
  v(0, 0) = 1.0;
  const Matrix A = v * v.transpose();  // rank one PSD
  const Matrix B = random_spd(5, 41);
  const Vector ev = product_eigenvalues(A, B);
  for (int i = 0; i < 5; ++i) {
    CHECK(ev(i) > 0.0);  // clamped, so sqrt/log stay finite
    CHECK(std::isfinite(std::sqrt(ev(i))));
  }
}

TEST_CASE("true_wasserstein closed forms") {
  SUBCASE("scalar") {
    Matrix a(1, 1), b(1, 1);
    a << 4.0;
    b << 9.0;
    const double d = true_wasserstein(a, b);
    CHECK(d == doctest::Approx(std::pow(2.0 - 3.0, 2)).epsilon(1e-12));
  }
  SUBCASE("commuting diagonal") {
    Vector da(3), db(3);
    da << 1.0, 2.0, 5.0;
    db << 4.0, 1.0, 3.0;
    const Matrix A = da.asDiagonal();
    const Matrix B = db.asDiagonal();
    double expect = 0.0;
    for (int i = 0; i < 3; ++i)
      expect += std::pow(std::sqrt(da(i)) - std::sqrt(db(i)), 2);
    CHECK(true_wasserstein(A, B) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("symmetry and zero on equal inputs") {
    const Matrix A = random_spd(6, 51);
    const Matrix B = random_spd(6, 52);
    CHECK(true_wasserstein(A, A) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(true_wasserstein(A, B) ==
          doctest::Approx(true_wasserstein(B, A)).epsilon(1e-10));
    CHECK(true_wasserstein(A, B) > 0.0);
  }
  SUBCASE("scaling: D(sA, sB) = s D(A, B)") {
    const Matrix A = random_spd(5, 61);
    const Matrix B = random_spd(5, 62);
    CHECK(true_wasserstein(4.0 * A, 4.0 * B) ==
          doctest::Approx(4.0 * true_wasserstein(A, B)).epsilon(1e-10));
  }
}

TEST_CASE("true_wasserstein Toeplitz pair matches an independent formula") {
  // Independent evaluation through the commuting-free closed form
  // tr A + tr B - 2 sum_i sqrt(lambda_i(AB)).
  const int p = 64;
  const Matrix A = toeplitz(p, 0.2);
  const Matrix B = toeplitz(p, 0.4);
  const Vector ev = product_eigenvalues(A, B);
  const double expect = A.trace() + B.trace() - 2.0 * ev.cwiseSqrt().sum();
  CHECK(true_wasserstein(A, B) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("true_frobenius_sq") {
  const Matrix A = random_spd(6, 71);
  const Matrix B = random_spd(6, 72);
  CHECK(true_frobenius_sq(A, B) ==
        doctest::Approx((A - B).squaredNorm()).epsilon(1e-12));
  CHECK(true_frobenius_sq(A, A) == 0.0);
}

TEST_CASE("all_finite flags NaN and infinity") {
  Matrix M = Matrix::Identity(3, 3);
  CHECK(all_finite(M));
  M(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK(!all_finite(M));
  M(1, 2) = std::numeric_limits<double>::infinity();
  CHECK(!all_finite(M));
}
