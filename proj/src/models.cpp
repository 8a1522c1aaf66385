#include "specdist/models.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

namespace specdist {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CovarianceModel CovarianceModel::toeplitz(int p, double r) {
  if (p < 1) throw_invalid("model: p must be >= 1");
  if (!(std::abs(r) < 1.0)) throw_invalid("model: toeplitz ratio must satisfy |r| < 1");
  CovarianceModel m;
  m.kind = Kind::toeplitz;
  m.p = p;
  m.toeplitz_r = r;
  return m;
}

CovarianceModel CovarianceModel::atomic(int p, std::vector<std::pair<double, int>> atoms,
                                        std::uint64_t basis_seed) {
  CovarianceModel m;
  m.kind = Kind::atomic;
  m.p = p;
  m.atoms = std::move(atoms);
  m.basis_seed = basis_seed;
  int total = 0;
  for (const auto& [value, mult] : m.atoms) {
    if (!(value > 0.0)) throw_invalid("model: atom eigenvalues must be positive");
    if (mult < 1) throw_invalid("model: atom multiplicities must be >= 1");
    total += mult;
  }
  if (total != p) throw_invalid("model: atom multiplicities must sum to p");
  return m;
}

CovarianceModel CovarianceModel::explicit_model(Matrix mat) {
  if (mat.rows() != mat.cols() || mat.rows() < 1)
    throw_invalid("model: explicit matrix must be square");
  CovarianceModel m;
  m.kind = Kind::explicit_matrix;
  m.p = static_cast<int>(mat.rows());
  m.explicit_m = symmetrize(mat);
  return m;
}

CovarianceModel CovarianceModel::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw_parse(std::string("model: bad JSON: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "toeplitz") {
      return toeplitz(j.at("p").get<int>(), j.at("r").get<double>());
    }
    if (kind == "atomic") {
      std::vector<std::pair<double, int>> atoms;
      for (const auto& a : j.at("atoms"))
        atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<int>());
      return atomic(j.at("p").get<int>(), std::move(atoms),
                    j.value("basis_seed", std::uint64_t{0}));
    }
    if (kind == "explicit") {
      const auto& rows = j.at("matrix");
      const int p = static_cast<int>(rows.size());
      Matrix m(p, p);
      for (int r = 0; r < p; ++r) {
        if (static_cast<int>(rows[r].size()) != p)
          throw_parse("model: explicit matrix is not square");
        for (int c = 0; c < p; ++c) m(r, c) = rows[r][c].get<double>();
      }
      return explicit_model(std::move(m));
    }
    throw_parse("model: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw_parse(std::string("model: bad schema: ") + e.what());
  }
}

std::string CovarianceModel::to_json_text() const {
  nlohmann::json j;
  j["p"] = p;
  switch (kind) {
    case Kind::toeplitz:
      j["kind"] = "toeplitz";
      j["r"] = toeplitz_r;
      break;
    case Kind::atomic: {
      j["kind"] = "atomic";
      j["basis_seed"] = basis_seed;
      auto arr = nlohmann::json::array();
      for (const auto& [value, mult] : atoms) arr.push_back({value, mult});
      j["atoms"] = std::move(arr);
      break;
    }
    case Kind::explicit_matrix: {
      j["kind"] = "explicit";
      auto rows = nlohmann::json::array();
      for (int r = 0; r < p; ++r) {
        auto row = nlohmann::json::array();
        for (int c = 0; c < p; ++c) row.push_back(explicit_m(r, c));
        rows.push_back(std::move(row));
      }
      j["matrix"] = std::move(rows);
      break;
    }
  }
  return j.dump();
}

namespace {

Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix G(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) G(r, c) = normal(gen);
  return G;
}

// QR of a Gaussian matrix with the R diagonal signs folded into Q, which makes
// the result Haar-distributed.
Matrix random_orthogonal(int p, std::uint64_t seed) {
  std::mt19937_64 gen(splitmix64(seed));
  Matrix G = gaussian_matrix(p, p, gen);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < p; ++i)
    if (R(i, i) < 0.0) Q.col(i) = -Q.col(i);
  return Q;
}

}  // namespace

Matrix realize_model(const CovarianceModel& model) {
  switch (model.kind) {
    case CovarianceModel::Kind::toeplitz: {
      Matrix C(model.p, model.p);
      for (int i = 0; i < model.p; ++i)
        for (int j = 0; j < model.p; ++j)
          C(i, j) = std::pow(model.toeplitz_r, std::abs(i - j));
      return C;
    }
    case CovarianceModel::Kind::atomic: {
      Vector d(model.p);
      int k = 0;
      for (const auto& [value, mult] : model.atoms)
        for (int m = 0; m < mult; ++m) d(k++) = value;
      Matrix Q = random_orthogonal(model.p, model.basis_seed);
      return symmetrize(Q * d.asDiagonal() * Q.transpose());
    }
    case CovarianceModel::Kind::explicit_matrix:
      return model.explicit_m;
  }
  throw_invalid("model: unreachable kind");
}

Matrix gaussian_samples_from_sqrt(const Matrix& sqrt_c, int n, std::uint64_t seed) {
  if (n < 1) throw_invalid("gaussian_samples: n must be >= 1");
  std::mt19937_64 gen(splitmix64(seed));
  Matrix Z = gaussian_matrix(static_cast<int>(sqrt_c.rows()), n, gen);
  return sqrt_c * Z;
}

Matrix gaussian_samples(const CovarianceModel& model, int n, std::uint64_t seed) {
  return gaussian_samples_from_sqrt(spd_sqrt(realize_model(model)), n, seed);
}

}  // namespace specdist
