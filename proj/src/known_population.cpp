#include "specdist/known_population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "specdist/quadrature.hpp"
#include "specdist/secular.hpp"

namespace specdist {

namespace {

// m(x) = -psi(x)/x with psi = prod(x - xi_i)/prod(x - lambda_i). The products
// are accumulated directly with periodic exponent extraction (frexp) so large
// p neither overflows nor pays a log() per factor. Positive on each
// (xi_j, lambda_j).
double m_tilde(const KnownPopulationModel& s, double x) {
  double num = -1.0, den = x;
  int exponent = 0;
  for (int i = 0; i < s.p; ++i) {
    num *= x - s.xi(i);
    den *= x - s.lambda(i);
    if ((i & 7) == 7) {
      int en, ed;
      num = std::frexp(num, &en);
      den = std::frexp(den, &ed);
      exponent += en - ed;
    }
  }
  return std::ldexp(num / den, exponent);
}

// u * m(lambda_k - u) with the cancelling factor (x - lambda_k) = -u divided
// out symbolically, so the value stays accurate down to u near rounding size.
// The k-th numerator difference is formed as U - u with U = lambda_k - xi_k.
double u_m_tilde_at(const KnownPopulationModel& s, int k, double U, double u) {
  const double x = s.lambda(k) - u;
  double num = 1.0, den = x;
  int exponent = 0;
  for (int i = 0; i < s.p; ++i) {
    num *= (i == k) ? U - u : x - s.xi(i);
    if (i != k) den *= x - s.lambda(i);
    if ((i & 7) == 7) {
      int en, ed;
      num = std::frexp(num, &en);
      den = std::frexp(den, &ed);
      exponent += en - ed;
    }
  }
  return std::ldexp(num / den, exponent);
}

}  // namespace

KnownPopulationModel build_known_model_from_lambda(const Vector& lambda, int n2) {
  const int p = static_cast<int>(lambda.size());
  if (p < 1) throw_invalid("known model: empty spectrum");
  if (p > n2) throw_regime("known model: requires p <= n2");
  KnownPopulationModel s;
  s.lambda = lambda;
  s.xi = secular_rank_one_eigenvalues(lambda, 1.0 / n2);
  s.p = p;
  s.n2 = n2;
  s.c2 = static_cast<double>(p) / n2;
  return s;
}

KnownPopulationModel build_known_model(const Matrix& M, const Matrix& X2) {
  if (M.rows() != X2.rows()) throw_invalid("known model: dimension mismatch");
  const Vector lambda = product_eigenvalues(M, sample_covariance(X2));
  return build_known_model_from_lambda(lambda, static_cast<int>(X2.cols()));
}

double estimate_sqrt_known(const KnownPopulationModel& s) {
  double total = 0.0;
  for (int j = 0; j < s.p; ++j) {
    const double a = s.xi(j);
    const double b = s.lambda(j);
    if (b - a < 1e-15 * b) continue;
    auto integrand = [&](double x) {
      const double m = m_tilde(s, x);
      return m > 0.0 ? std::sqrt(m) : 0.0;
    };
    QuadratureResult q =
        chebyshev_endpoint_integrate(integrand, a, b, Tolerances::quad_rel);
    if (!q.converged)
      throw_numeric("estimate_sqrt_known: quadrature failed on interval " +
                    std::to_string(j));
    total += q.value;
  }
  return 2.0 / (M_PI * s.c2) * total;
}

namespace {

// Partial derivatives d D / d lambda_k of the one-sample sqrt estimator with
// respect to the observed eigenvalues. Writing c = 1/n2 and
// m(x) = c * sum_i 1/(lambda_i - x) + (p - n2)/(n2 x), the j != k intervals
// contribute the plain quadrature
//   -(c/2) * integral over (xi_j, lambda_j) of (lambda_k - x)^{-2} m^{-1/2}
// while the k-th interval needs the finite-part combination
//   sqrt(c) / sqrt(U_k) - (c/2) * integral over (0, U_k) of
//       u^{-3/2} [ (u m(lambda_k - u))^{-1/2} - c^{-1/2} ] du
// with U_k = lambda_k - xi_k (the boundary blow-up and the divergent part of
// the integrand cancel exactly; both halves above are finite).
Vector sqrt_known_lambda_gradient(const KnownPopulationModel& s) {
  const double c = 1.0 / s.n2;
  const double sqrt_c = std::sqrt(c);
  const double K = 2.0 / (M_PI * s.c2);
  Vector grad = Vector::Zero(s.p);

  // Cross-interval terms: for each interval j share the m^{-1/2} node values
  // across every target k, refining the node count until all entries settle.
  for (int j = 0; j < s.p; ++j) {
    const double a = s.xi(j);
    const double b = s.lambda(j);
    if (b - a < 1e-15 * b) continue;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Vector prev;
    for (int n = 64; n <= (1 << 13); n *= 2) {
      const double h = M_PI / n;
      Vector cur = Vector::Zero(s.p);
      for (int i = 0; i < n; ++i) {
        const double theta = (i + 0.5) * h;
        const double x = mid - half * std::cos(theta);
        const double m = m_tilde(s, x);
        if (m <= 0.0) continue;
        const double w = std::sin(theta) * half * h / std::sqrt(m);
        for (int k = 0; k < s.p; ++k) {
          if (k == j) continue;
          const double d = s.lambda(k) - x;
          cur(k) += w / (d * d);
        }
      }
      if (prev.size() != 0) {
        double worst = 0.0;
        for (int k = 0; k < s.p; ++k) {
          if (k == j) continue;
          const double scale = std::max(std::abs(cur(k)), std::abs(prev(k)));
          if (scale > 0.0) worst = std::max(worst, std::abs(cur(k) - prev(k)) / scale);
        }
        if (worst <= 1e-6) {
          prev = cur;
          break;
        }
      }
      prev = cur;
    }
    for (int k = 0; k < s.p; ++k)
      if (k != j) grad(k) += -(c / 2.0) * prev(k);
  }

  // Finite-part own-interval terms.
  for (int k = 0; k < s.p; ++k) {
    const double U = s.lambda(k) - s.xi(k);
    if (U < 1e-15 * s.lambda(k)) continue;
    auto integrand = [&](double u) {
      const double um = u_m_tilde_at(s, k, U, u);
      if (um <= 0.0) return 0.0;
      return (1.0 / std::sqrt(um) - 1.0 / sqrt_c) / (u * std::sqrt(u));
    };
    // The integrand changes sign, so anchor the relative convergence test to
    // the scale of the finite-part boundary term it is paired with.
    const double floor = 2.0 / (sqrt_c * std::sqrt(U));
    QuadratureResult q = chebyshev_endpoint_integrate(
        integrand, 0.0, U, Tolerances::quad_rel, 64, 1 << 14, floor);
    if (!q.converged)
      throw_numeric("gradient: finite-part quadrature failed on interval " +
                    std::to_string(k));
    grad(k) += sqrt_c / std::sqrt(U) - (c / 2.0) * q.value;
  }

  return K * grad;
}

struct Frame {
  Matrix sqrt_m;
  Matrix inv_sqrt_m;
  EigenSystem product_es;  // of M^{1/2} C2_hat M^{1/2}
  KnownPopulationModel model;
};

Frame make_frame(const Matrix& M, const Matrix& chat2, int n2) {
  EigenSystem em = sym_eig(M);
  if (em.values(0) <= 0.0) throw_invalid("fit: iterate is not positive definite");
  Vector d_sqrt = em.values.cwiseSqrt();
  Frame f;
  f.sqrt_m = symmetrize(em.vectors * d_sqrt.asDiagonal() * em.vectors.transpose());
  f.inv_sqrt_m = symmetrize(em.vectors * d_sqrt.cwiseInverse().asDiagonal() *
                            em.vectors.transpose());
  Matrix S = symmetrize(f.sqrt_m * chat2 * f.sqrt_m);
  f.product_es = sym_eig(S);
  Vector lambda = f.product_es.values.cwiseMax(1e-300);
  f.model = build_known_model_from_lambda(lambda, n2);
  return f;
}

double min_relative_gap(const Vector& lambda) {
  double gap = std::numeric_limits<double>::infinity();
  const double scale = std::max(std::abs(lambda(lambda.size() - 1)), 1e-300);
  for (Eigen::Index i = 1; i < lambda.size(); ++i)
    gap = std::min(gap, (lambda(i) - lambda(i - 1)) / scale);
  return gap;
}

}  // namespace

CovarianceFitProblem::CovarianceFitProblem(const Matrix& X2)
    : chat2_(sample_covariance(X2)),
      n2_(static_cast<int>(X2.cols())),
      p_(static_cast<int>(X2.rows())) {
  if (p_ > n2_) throw_regime("fit: requires p <= n2");
}

double CovarianceFitProblem::residual(const Matrix& M) const {
  Frame f = make_frame(M, chat2_, n2_);
  return (M.trace() + chat2_.trace()) / p_ - 2.0 * estimate_sqrt_known(f.model);
}

double CovarianceFitProblem::objective(const Matrix& M) const {
  const double g = residual(M);
  return g * g;
}

Matrix CovarianceFitProblem::gradient(const Matrix& M) const {
  // Near-degenerate product eigenvalues make the per-eigenvalue derivatives
  // ill-posed; retry on a slightly perturbed copy of M.
  Matrix M_eval = M;
  std::mt19937_64 gen(0x5eedULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  Frame f = make_frame(M_eval, chat2_, n2_);
  for (int attempt = 0; min_relative_gap(f.model.lambda) < 1e-10; ++attempt) {
    if (attempt >= 3)
      throw_numeric("gradient: product spectrum is degenerate beyond perturbation tolerance");
    Matrix noise(p_, p_);
    for (int i = 0; i < p_; ++i)
      for (int j = 0; j < p_; ++j) noise(i, j) = normal(gen);
    M_eval = symmetrize(M_eval + 1e-9 * M.norm() * symmetrize(noise));
    f = make_frame(M_eval, chat2_, n2_);
  }

  const double g = (M_eval.trace() + chat2_.trace()) / p_ -
                   2.0 * estimate_sqrt_known(f.model);
  const Vector dlam = sqrt_known_lambda_gradient(f.model);

  // Riemannian gradient of the residual: (1/p) M^2 minus the spectral part
  // M^{1/2} U diag(lambda_k * dD/dlambda_k) U^T M^{1/2} (frame-diagonal since
  // the estimator depends on M through the product eigenvalues only).
  Vector scaled = f.model.lambda.cwiseProduct(dlam);
  Matrix spectral = symmetrize(
      f.sqrt_m * f.product_es.vectors * scaled.asDiagonal() *
      f.product_es.vectors.transpose() * f.sqrt_m);
  Matrix grad_g = (M_eval * M_eval) / p_ - 2.0 * spectral;
  return symmetrize(2.0 * g * grad_g);
}

FitResult CovarianceFitProblem::fit(const Matrix& init, const DescentOptions& opts) const {
  FitResult result;
  Matrix M = symmetrize(init);
  double h = objective(M);
  double t_start = opts.initial_step;

  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    Matrix G = gradient(M);
    Frame f = make_frame(M, chat2_, n2_);
    Matrix W = symmetrize(f.inv_sqrt_m * G * f.inv_sqrt_m);
    const double decrease = W.squaredNorm();  // = <grad, grad>_M
    const double grad_norm = std::sqrt(decrease);
    result.trace.push_back(DescentState{iter, h, grad_norm, 0.0});

    if (grad_norm < opts.grad_tol || h < opts.h_tol) {
      result.converged = true;
      break;
    }
    if (iter == opts.max_iterations) break;

    double t = t_start;
    bool accepted = false;
    for (int halving = 0; halving <= opts.max_halvings && t >= 1e-12; ++halving) {
      Matrix candidate = symmetrize(f.sqrt_m * spd_exp(-t * W) * f.sqrt_m);
      const double h_t = objective(candidate);
      if (h_t <= h - opts.armijo * t * decrease) {
        M = candidate;
        h = h_t;
        result.trace.back().step = t;
        accepted = true;
        // Grow the next trial step so flat tails are not limited to the
        // initial step size; backtracking undoes any overshoot.
        t_start = std::min(2.0 * t, 1e6 * opts.initial_step);
        break;
      }
      t *= opts.shrink;
    }
    if (!accepted) {
      result.stalled = true;
      break;
    }
  }

  result.M = M;
  return result;
}

Matrix linear_shrinkage_init(const Matrix& X2) {
  const double p = static_cast<double>(X2.rows());
  const double n = static_cast<double>(X2.cols());
  if (n < 2) throw_invalid("linear_shrinkage_init: needs n >= 2");
  const Matrix chat = sample_covariance(X2);
  const double mu = chat.trace() / p;
  const double d2 = (chat - mu * Matrix::Identity(chat.rows(), chat.cols())).squaredNorm() / p;
  if (d2 <= 0.0) return chat;
  double fourth = 0.0;
  for (Eigen::Index k = 0; k < X2.cols(); ++k) {
    const double q = X2.col(k).squaredNorm();
    fourth += q * q;
  }
  // (1/n^2) sum_k ||x_k x_k^T - C_hat||_F^2 / p, expanded.
  const double b2_raw = (fourth / (n * n) - chat.squaredNorm() / n) / p;
  const double b2 = std::min(d2, std::max(b2_raw, 0.0));
  const double rho = b2 / d2;
  return symmetrize(rho * mu * Matrix::Identity(chat.rows(), chat.cols()) +
                    (1.0 - rho) * chat);
}

FitResult fit_covariance(const Matrix& X2, const DescentOptions& opts) {
  CovarianceFitProblem problem(X2);
  return problem.fit(linear_shrinkage_init(X2), opts);
}

}  // namespace specdist
