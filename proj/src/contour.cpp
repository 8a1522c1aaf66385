#include "specdist/contour.hpp"

#include <cmath>

namespace specdist {

double contour_functional_oracle(
    const ProductSpectrum& s,
    const std::function<std::complex<double>(std::complex<double>)>& f,
    int initial_nodes) {
  using C = std::complex<double>;

  const double root_min = std::min(s.xi(0), s.eta(0));
  const double root_max = s.lambda(s.p - 1);
  const double center = 0.5 * (s.lambda(0) + root_max);
  // Left edge between root_min/2 (right half-plane margin, away from the
  // phi'/phi pole at z = 0) and root_min; right edge clears lambda_p.
  const double semi_a = center - 0.7 * root_min;
  const double semi_b = 0.5 * semi_a;
  if (center - semi_a <= 0.0)
    throw Error(ErrorKind::invalid_input,
                "contour_functional_oracle: contour would cross real[z] <= 0");

  const double prefactor = static_cast<double>(s.n2) / s.p;
  double prev = 0.0;
  bool have_prev = false;
  for (int n = initial_nodes; n <= (1 << 16); n *= 2) {
    C acc(0.0, 0.0);
    const double h = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i) {
      const double theta = i * h;
      const C z(center + semi_a * std::cos(theta), semi_b * std::sin(theta));
      const C dz(-semi_a * std::sin(theta), semi_b * std::cos(theta));
      const PhiPsiComplex v = phi_psi_complex(s, z);
      acc += f(v.phi / v.psi) * (v.dphi_over_phi - v.dpsi_over_psi) * v.psi * dz;
    }
    // (1/(2 pi i)) * integral; trapezoid weights h are uniform on the circle.
    const double value = prefactor * (acc * h / C(0.0, 2.0 * M_PI)).real();
    if (have_prev) {
      const double scale = std::max({std::abs(value), std::abs(prev), 1e-300});
      if (std::abs(value - prev) <= Tolerances::contour_rel * scale) return value;
    }
    prev = value;
    have_prev = true;
  }
  throw_numeric("contour_functional_oracle: node doubling did not converge");
}

}  // namespace specdist
