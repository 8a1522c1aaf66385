#include "specdist/linalg.hpp"

#include <cmath>

namespace specdist {

bool all_finite(const Matrix& M) { return M.allFinite(); }

EigenSystem sym_eig(const Matrix& M) {
  if (M.rows() != M.cols()) throw_invalid("sym_eig: matrix not square");
  if (!M.allFinite()) throw_invalid("sym_eig: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M));
  if (es.info() != Eigen::Success) throw_numeric("sym_eig: eigensolver failed");
  return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

Matrix sample_covariance(const Matrix& X) {
  if (X.rows() < 1 || X.cols() < 1) throw_invalid("sample_covariance: empty matrix");
  if (!X.allFinite()) throw_invalid("sample_covariance: non-finite entries");
  Matrix C = (X * X.transpose()) / static_cast<double>(X.cols());
  return symmetrize(C);
}

Matrix spd_sqrt(const Matrix& M) {
  EigenSystem es = sym_eig(M);
  const double scale = std::max(std::abs(es.values(0)), std::abs(es.values(es.values.size() - 1)));
  if (es.values(0) < -Tolerances::spd_rel * scale)
    throw_invalid("spd_sqrt: matrix has a significantly negative eigenvalue");
  Vector d = es.values.cwiseMax(0.0).cwiseSqrt();
  return symmetrize(es.vectors * d.asDiagonal() * es.vectors.transpose());
}

Matrix spd_exp(const Matrix& S) {
  EigenSystem es = sym_eig(S);
  Vector d = es.values.array().exp();
  return symmetrize(es.vectors * d.asDiagonal() * es.vectors.transpose());
}

Matrix spd_log(const Matrix& M) {
  EigenSystem es = sym_eig(M);
  if (es.values(0) <= 0.0) throw_invalid("spd_log: matrix not positive definite");
  Vector d = es.values.array().log();
  return symmetrize(es.vectors * d.asDiagonal() * es.vectors.transpose());
}

Vector product_eigenvalues(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw_invalid("product_eigenvalues: dimension mismatch");
  Matrix S = spd_sqrt(A);
  Matrix P = symmetrize(S * symmetrize(B) * S);
  EigenSystem es = sym_eig(P);
  Vector vals = es.values;
  const double scale = P.norm();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) <= 0.0) {
      if (vals(i) < -Tolerances::product_clamp_rel * scale)
        throw_invalid("product_eigenvalues: product has a significantly negative eigenvalue");
      vals(i) = 1e-300;
    }
  }
  return vals;
}

double true_wasserstein(const Matrix& C1, const Matrix& C2) {
  Vector lam = product_eigenvalues(C1, C2);
  return C1.trace() + C2.trace() - 2.0 * lam.cwiseSqrt().sum();
}

double true_frobenius_sq(const Matrix& C1, const Matrix& C2) {
  return (C1 - C2).squaredNorm();
}

}  // namespace specdist
