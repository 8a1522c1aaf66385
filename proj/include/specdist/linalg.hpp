#ifndef SPECDIST_LINALG_HPP
#define SPECDIST_LINALG_HPP

#include <Eigen/Dense>

#include "specdist/errors.hpp"

namespace specdist {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Shared numerical tolerances.
struct Tolerances {
  static constexpr double secular_rel = 1e-12;        // root relative accuracy
  static constexpr double duplicate_rel = 1e-12;      // eigenvalue deflation
  static constexpr double product_clamp_rel = 1e-10;  // tiny negative eigenvalues
  static constexpr double spd_rel = 1e-8;             // negative-eigenvalue rejection
  static constexpr double quad_rel = 1e-8;            // quadrature refinement target
  static constexpr double contour_rel = 1e-9;         // contour oracle refinement
};

struct EigenSystem {
  Vector values;   // ascending
  Matrix vectors;  // orthogonal, columns match values
};

// Symmetric eigendecomposition (LAPACK-style ascending order).
EigenSystem sym_eig(const Matrix& M);

inline Matrix symmetrize(const Matrix& M) {
  return 0.5 * (M + M.transpose());
}

bool all_finite(const Matrix& M);

// (1/n) X X^T for a p x n block of column observations.
Matrix sample_covariance(const Matrix& X);

// Symmetric square root of an SPD/PSD matrix via eigendecomposition;
// eigenvalues below -spd_rel * ||M|| are rejected, small negatives clamped to 0.
Matrix spd_sqrt(const Matrix& M);

// Matrix exponential / logarithm of a symmetric matrix via eigendecomposition.
Matrix spd_exp(const Matrix& S);
Matrix spd_log(const Matrix& M);

// Eigenvalues of A*B for A PSD, B symmetric, computed through the symmetric
// similarity A^{1/2} B A^{1/2}; ascending. Tiny negatives are clamped to a
// subnormal positive value so downstream sqrt/log stay finite.
Vector product_eigenvalues(const Matrix& A, const Matrix& B);

// tr(C1) + tr(C2) - 2 tr[(C1^{1/2} C2 C1^{1/2})^{1/2}], the squared
// Wasserstein-2 distance between centered Gaussians.
double true_wasserstein(const Matrix& C1, const Matrix& C2);

// ||C1 - C2||_F^2.
double true_frobenius_sq(const Matrix& C1, const Matrix& C2);

}  // namespace specdist

#endif
