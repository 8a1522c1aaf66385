#include "specdist/spectrum.hpp"

#include <cmath>

#include "specdist/secular.hpp"

namespace specdist {

ProductSpectrum build_spectrum(const Vector& lambda, int n1, int n2) {
  const int p = static_cast<int>(lambda.size());
  if (p < 1) throw_invalid("build_spectrum: empty spectrum");
  if (p >= n1 || p >= n2)
    throw_regime("build_spectrum: requires p < min(n1, n2)");
  if (lambda(0) <= 0.0)
    throw_invalid("build_spectrum: eigenvalues must be strictly positive");
  ProductSpectrum s;
  s.lambda = lambda;
  s.xi = secular_rank_one_eigenvalues(lambda, 1.0 / n1);
  s.eta = (n1 == n2) ? s.xi : secular_rank_one_eigenvalues(lambda, 1.0 / n2);
  s.p = p;
  s.n1 = n1;
  s.n2 = n2;
  s.c1 = static_cast<double>(p) / n1;
  s.c2 = static_cast<double>(p) / n2;
  return s;
}

namespace {

// Accumulates prod (x - r_i) as log-magnitude + sign, plus sum 1/(x - r_i).
struct ProductTerms {
  double log_mag = 0.0;
  double sign = 1.0;
  double inv_sum = 0.0;
};

ProductTerms accumulate(const Vector& roots, double x, const char* what) {
  ProductTerms t;
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double d = x - roots(i);
    if (std::abs(d) <= 1e-14 * std::max(std::abs(x), std::abs(roots(i))))
      throw_invalid(std::string("phi_psi: evaluation point collides with ") + what +
                    " root index " + std::to_string(i));
    t.log_mag += std::log(std::abs(d));
    if (d < 0.0) t.sign = -t.sign;
    t.inv_sum += 1.0 / d;
  }
  return t;
}

}  // namespace

PhiPsi phi_psi(const ProductSpectrum& s, double x) {
  const ProductTerms lam = accumulate(s.lambda, x, "lambda");
  const ProductTerms xi = accumulate(s.xi, x, "xi");
  const ProductTerms eta = accumulate(s.eta, x, "eta");
  if (x == 0.0) throw_invalid("phi_psi: x = 0 is a zero of phi");

  PhiPsi out;
  const double phi_sign = (x < 0.0 ? -1.0 : 1.0) * lam.sign * xi.sign;
  out.phi = phi_sign * std::exp(std::log(std::abs(x)) + lam.log_mag - xi.log_mag);
  out.psi = eta.sign * lam.sign * std::exp(eta.log_mag - lam.log_mag);
  out.dphi = out.phi * (1.0 / x + lam.inv_sum - xi.inv_sum);
  out.dpsi = out.psi * (eta.inv_sum - lam.inv_sum);
  return out;
}

PhiPsiComplex phi_psi_complex(const ProductSpectrum& s, std::complex<double> z) {
  using C = std::complex<double>;
  C log_phi = std::log(z);
  C dlog_phi = 1.0 / z;
  C log_psi = 0.0;
  C dlog_psi = 0.0;
  for (int i = 0; i < s.p; ++i) {
    log_phi += std::log(z - s.lambda(i));
    log_phi -= std::log(z - s.xi(i));
    dlog_phi += 1.0 / (z - s.lambda(i)) - 1.0 / (z - s.xi(i));
    log_psi += std::log(z - s.eta(i)) - std::log(z - s.lambda(i));
    dlog_psi += 1.0 / (z - s.eta(i)) - 1.0 / (z - s.lambda(i));
  }
  PhiPsiComplex out;
  out.phi = std::exp(log_phi);
  out.psi = std::exp(log_psi);
  out.dphi_over_phi = dlog_phi;
  out.dpsi_over_psi = dlog_psi;
  return out;
}

double stieltjes(const Vector& lambda, double x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) s += 1.0 / (lambda(i) - x);
  return s / static_cast<double>(lambda.size());
}

}  // namespace specdist
