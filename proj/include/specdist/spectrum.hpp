#ifndef SPECDIST_SPECTRUM_HPP
#define SPECDIST_SPECTRUM_HPP

#include <complex>

#include "specdist/linalg.hpp"

namespace specdist {

// Spectrum of a product of two sample covariances together with the secular
// root sets needed by the deconvolution estimators:
//   xi_i  : eigenvalues of diag(lambda) - (1/n1) sqrt(lambda) sqrt(lambda)^T
//   eta_i : same with 1/n2
// Both interlace lambda from below (xi_1 <= lambda_1 <= xi_2 <= ...).
struct ProductSpectrum {
  Vector lambda;
  Vector xi;
  Vector eta;
  int p = 0;
  int n1 = 0;
  int n2 = 0;
  double c1 = 0.0;  // p / n1
  double c2 = 0.0;  // p / n2
};

ProductSpectrum build_spectrum(const Vector& lambda, int n1, int n2);

struct PhiPsi {
  double phi;
  double psi;
  double dphi;
  double dpsi;
};

// phi(x) = x * prod(x - lambda_i) / prod(x - xi_i)
// psi(x) =     prod(x - eta_i)    / prod(x - lambda_i)
// evaluated in log-magnitude + sign form; derivatives via the logarithmic
// derivative. x must stay away from the poles of the requested function.
PhiPsi phi_psi(const ProductSpectrum& s, double x);

// Same quantities for complex arguments off the real axis, exposed for the
// contour-integral oracle. dphi_over_phi is phi'/phi, likewise for psi.
struct PhiPsiComplex {
  std::complex<double> phi;
  std::complex<double> psi;
  std::complex<double> dphi_over_phi;
  std::complex<double> dpsi_over_psi;
};
PhiPsiComplex phi_psi_complex(const ProductSpectrum& s, std::complex<double> z);

// Stieltjes transform of the empirical spectral measure,
// m(x) = (1/p) sum_i 1 / (lambda_i - x).
double stieltjes(const Vector& lambda, double x);

}  // namespace specdist

#endif
