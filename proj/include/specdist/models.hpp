#ifndef SPECDIST_MODELS_HPP
#define SPECDIST_MODELS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "specdist/linalg.hpp"

namespace specdist {

// Population covariance descriptions used by the benchmark harness.
//   toeplitz:  C_ij = r^|i-j|
//   atomic:    spectrum given as (eigenvalue, multiplicity) atoms, conjugated
//              by a seeded random orthogonal basis
//   explicit:  a user-supplied SPD matrix
struct CovarianceModel {
  enum class Kind { toeplitz, atomic, explicit_matrix };

  Kind kind = Kind::toeplitz;
  int p = 0;
  double toeplitz_r = 0.0;
  std::vector<std::pair<double, int>> atoms;  // (eigenvalue, multiplicity)
  std::uint64_t basis_seed = 0;
  Matrix explicit_m;

  static CovarianceModel toeplitz(int p, double r);
  static CovarianceModel atomic(int p, std::vector<std::pair<double, int>> atoms,
                                std::uint64_t basis_seed);
  static CovarianceModel explicit_model(Matrix m);

  // JSON schema: {"kind": "toeplitz"|"atomic"|"explicit",
  //   "p": int, "r": double,                    (toeplitz)
  //   "atoms": [[value, multiplicity], ...], "basis_seed": int,  (atomic)
  //   "matrix": [[...], ...] }                  (explicit)
  static CovarianceModel from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// SplitMix64 seed expansion; used everywhere a derived seed stream is needed.
std::uint64_t splitmix64(std::uint64_t x);
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

Matrix realize_model(const CovarianceModel& model);

// n i.i.d. columns C^{1/2} z, z standard normal, from a seeded generator.
Matrix gaussian_samples(const CovarianceModel& model, int n, std::uint64_t seed);
// Same, with the matrix square root already in hand.
Matrix gaussian_samples_from_sqrt(const Matrix& sqrt_c, int n, std::uint64_t seed);

}  // namespace specdist

#endif
