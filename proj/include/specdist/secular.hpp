#ifndef SPECDIST_SECULAR_HPP
#define SPECDIST_SECULAR_HPP

#include "specdist/linalg.hpp"

namespace specdist {

// Eigenvalues (ascending) of diag(lambda) - rho * sqrt(lambda) sqrt(lambda)^T
// for lambda sorted ascending and strictly positive. They are the roots of
//   1 - rho * sum_i lambda_i / (lambda_i - x)
// and strictly interlace lambda from below. Requires rho * p <= 1; at
// rho * p = 1 the smallest root is exactly 0. Repeated lambda values are
// deflated: a value of multiplicity m reappears m-1 times among the roots.
Vector secular_rank_one_eigenvalues(const Vector& lambda, double rho);

}  // namespace specdist

#endif
