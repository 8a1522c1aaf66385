#ifndef SPECDIST_CONTOUR_HPP
#define SPECDIST_CONTOUR_HPP

#include <complex>
#include <functional>

#include "specdist/spectrum.hpp"

namespace specdist {

// Numeric evaluation of the generic contour-integral estimator
//   (n2 / (2 pi i p)) * closed-integral of
//     f(phi(z)/psi(z)) [phi'/phi - psi'/psi] psi(z) dz
// over an ellipse in the right half-plane that encloses the spectrum and all
// secular roots. f must be analytic on the image region (entire functions,
// in particular polynomials, are safe); multivalued functions such as sqrt
// are outside the contract. Trapezoid rule with node doubling until the
// relative change drops below Tolerances::contour_rel.
double contour_functional_oracle(
    const ProductSpectrum& s,
    const std::function<std::complex<double>(std::complex<double>)>& f,
    int initial_nodes = 64);

}  // namespace specdist

#endif
