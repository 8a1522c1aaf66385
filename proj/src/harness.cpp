#include "specdist/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "specdist/contour.hpp"
#include "specdist/csv.hpp"
#include "specdist/estimators.hpp"
#include "specdist/known_population.hpp"

namespace specdist {

namespace {

const std::vector<int> kFigure2Abscissas = {100, 111, 122, 133, 144,
                                            155, 166, 177, 188, 200};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs fn(index) for index in [0, count) on a small pool; results are
// collected by index so the output never depends on scheduling.
template <typename Fn>
std::vector<std::vector<ResultRow>> parallel_map(int count, int workers, Fn&& fn) {
  std::vector<std::vector<ResultRow>> out(count);
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min(workers, count);
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

double rel_error_of(double value, double true_value) {
  return true_value > 0.0 ? std::abs(value - true_value) / true_value : 0.0;
}

ResultRow make_row(int p, int n1, int n2, std::string trial, std::string method,
                   double value, double true_value, double wall = 0.0) {
  ResultRow r;
  r.p = p;
  r.n1 = n1;
  r.n2 = n2;
  r.trial = std::move(trial);
  r.method = std::move(method);
  r.value = value;
  r.true_value = true_value;
  r.rel_error = rel_error_of(value, true_value);
  r.wall_time = wall;
  return r;
}

CovarianceModel model_at_dimension(const std::optional<CovarianceModel>& m, int p,
                                   double default_toeplitz_r, std::uint64_t basis_seed) {
  if (!m) return CovarianceModel::toeplitz(p, default_toeplitz_r);
  if (m->p == p) return *m;
  switch (m->kind) {
    case CovarianceModel::Kind::toeplitz:
      return CovarianceModel::toeplitz(p, m->toeplitz_r);
    case CovarianceModel::Kind::atomic: {
      // Rescale multiplicities proportionally when possible.
      if (p % m->p == 0) {
        auto atoms = m->atoms;
        for (auto& [value, mult] : atoms) mult *= p / m->p;
        return CovarianceModel::atomic(p, std::move(atoms), basis_seed);
      }
      throw_invalid("config: atomic model dimension does not divide requested p");
    }
    case CovarianceModel::Kind::explicit_matrix:
      throw_invalid("config: explicit model dimension does not match requested p");
  }
  throw_invalid("config: unreachable model kind");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw_invalid("config: trials must be >= 1");
  if (cfg.workers < 1) throw_invalid("config: workers must be >= 1");
}

}  // namespace

ExperimentConfig ExperimentConfig::table1_defaults() {
  ExperimentConfig cfg;
  cfg.kind = Kind::table1;
  cfg.p_list = {2, 4, 8, 16, 32, 64, 128, 256, 512};
  cfg.n1 = 1024;
  cfg.n2 = 2048;
  cfg.trials = 100;
  return cfg;
}

ExperimentConfig ExperimentConfig::figure2_defaults() {
  ExperimentConfig cfg;
  cfg.kind = Kind::figure2;
  cfg.p_list = {100};
  cfg.n_list = kFigure2Abscissas;
  cfg.trials = 10;
  cfg.model_c2 = CovarianceModel::atomic(
      100, {{0.1, 25}, {3.0, 25}, {4.0, 25}, {5.0, 25}}, /*basis_seed=*/7);
  return cfg;
}

ExperimentConfig ExperimentConfig::oracle_check_defaults() {
  ExperimentConfig cfg;
  cfg.kind = Kind::oracle_check;
  cfg.p_list = {3, 8, 32};
  cfg.trials = 20;
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw_parse(std::string("config: bad JSON: ") + e.what());
  }
  try {
    const std::string kind = j.value("experiment", "table1");
    ExperimentConfig cfg;
    if (kind == "table1")
      cfg = table1_defaults();
    else if (kind == "figure2")
      cfg = figure2_defaults();
    else if (kind == "oracle-check")
      cfg = oracle_check_defaults();
    else
      throw_parse("config: unknown experiment '" + kind + "'");
    if (j.contains("p")) cfg.p_list = j.at("p").get<std::vector<int>>();
    if (j.contains("n")) cfg.n_list = j.at("n").get<std::vector<int>>();
    if (j.contains("n1")) cfg.n1 = j.at("n1").get<int>();
    if (j.contains("n2")) cfg.n2 = j.at("n2").get<int>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("per_trial_rows")) cfg.per_trial_rows = j.at("per_trial_rows").get<bool>();
    if (j.contains("c1")) cfg.model_c1 = CovarianceModel::from_json_text(j.at("c1").dump());
    if (j.contains("c2")) cfg.model_c2 = CovarianceModel::from_json_text(j.at("c2").dump());
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw_parse(std::string("config: bad schema: ") + e.what());
  }
}

std::string ExperimentConfig::to_json_text() const {
  nlohmann::json j;
  switch (kind) {
    case Kind::table1: j["experiment"] = "table1"; break;
    case Kind::figure2: j["experiment"] = "figure2"; break;
    case Kind::oracle_check: j["experiment"] = "oracle-check"; break;
  }
  j["p"] = p_list;
  if (!n_list.empty()) j["n"] = n_list;
  j["n1"] = n1;
  j["n2"] = n2;
  j["trials"] = trials;
  j["seed"] = seed;
  j["workers"] = workers;
  j["per_trial_rows"] = per_trial_rows;
  if (model_c1) j["c1"] = nlohmann::json::parse(model_c1->to_json_text());
  if (model_c2) j["c2"] = nlohmann::json::parse(model_c2->to_json_text());
  return j.dump(2);
}

std::vector<ResultRow> run_table1(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<ResultRow> rows;
  std::uint64_t block = 0;
  for (int p : cfg.p_list) {
    if (p >= std::min(cfg.n1, cfg.n2))
      throw_regime("table1: p must satisfy p < min(n1, n2)");
    const CovarianceModel m1 = model_at_dimension(cfg.model_c1, p, 0.2, cfg.seed + 1);
    const CovarianceModel m2 = model_at_dimension(cfg.model_c2, p, 0.4, cfg.seed + 2);
    const Matrix C1 = realize_model(m1);
    const Matrix C2 = realize_model(m2);
    const Matrix sqrt_c1 = spd_sqrt(C1);
    const Matrix sqrt_c2 = spd_sqrt(C2);
    const double truth = true_wasserstein(C1, C2) / p;

    const std::uint64_t block_base = block;
    auto trial_rows = parallel_map(cfg.trials, cfg.workers, [&](int t) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::uint64_t base = (block_base + t) * 2;
      const Matrix X1 = gaussian_samples_from_sqrt(sqrt_c1, cfg.n1, derive_seed(cfg.seed, base));
      const Matrix X2 = gaussian_samples_from_sqrt(sqrt_c2, cfg.n2, derive_seed(cfg.seed, base + 1));
      const double proposed = estimate_wasserstein(X1, X2).value;
      const double classical = plugin_wasserstein(X1, X2).value;
      const double wall = seconds_since(t0);
      std::vector<ResultRow> out;
      out.push_back(make_row(p, cfg.n1, cfg.n2, std::to_string(t), "rmt-wasserstein",
                             proposed, truth, wall));
      out.push_back(make_row(p, cfg.n1, cfg.n2, std::to_string(t), "plugin-wasserstein",
                             classical, truth, wall));
      return out;
    });
    block += cfg.trials;

    double mean_rmt = 0.0, mean_plugin = 0.0;
    for (const auto& tr : trial_rows) {
      mean_rmt += tr[0].value;
      mean_plugin += tr[1].value;
      if (cfg.per_trial_rows) rows.insert(rows.end(), tr.begin(), tr.end());
    }
    mean_rmt /= cfg.trials;
    mean_plugin /= cfg.trials;
    rows.push_back(make_row(p, cfg.n1, cfg.n2, "mean", "rmt-wasserstein", mean_rmt, truth));
    rows.push_back(make_row(p, cfg.n1, cfg.n2, "mean", "plugin-wasserstein", mean_plugin, truth));
  }
  return rows;
}

std::vector<ResultRow> run_figure2(const ExperimentConfig& cfg) {
  validate(cfg);
  const int p = cfg.p_list.empty() ? 100 : cfg.p_list.front();
  const CovarianceModel model = model_at_dimension(
      cfg.model_c2 ? cfg.model_c2 : ExperimentConfig::figure2_defaults().model_c2, p, 0.2,
      cfg.seed + 2);
  const Matrix C = realize_model(model);
  const Matrix sqrt_c = spd_sqrt(C);
  const std::vector<int>& n_list = cfg.n_list.empty() ? kFigure2Abscissas : cfg.n_list;

  std::vector<ResultRow> rows;
  for (size_t ni = 0; ni < n_list.size(); ++ni) {
    const int n = n_list[ni];
    if (p > n) throw_regime("figure2: p must satisfy p <= n");
    auto trial_rows = parallel_map(cfg.trials, cfg.workers, [&](int t) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::uint64_t stream = ni * 100003ULL + static_cast<std::uint64_t>(t);
      const Matrix X2 = gaussian_samples_from_sqrt(sqrt_c, n, derive_seed(cfg.seed, stream));
      const Matrix scm = sample_covariance(X2);
      const Matrix shrunk = linear_shrinkage_init(X2);
      CovarianceFitProblem problem(X2);
      const FitResult fit = problem.fit(shrunk);
      const double wall = seconds_since(t0);
      std::vector<ResultRow> out;
      out.push_back(make_row(p, 0, n, std::to_string(t), "proposed-fit",
                             true_wasserstein(C, fit.M) / p, 0.0, wall));
      out.push_back(make_row(p, 0, n, std::to_string(t), "scm",
                             true_wasserstein(C, scm) / p, 0.0, wall));
      out.push_back(make_row(p, 0, n, std::to_string(t), "shrinkage-init",
                             true_wasserstein(C, shrunk) / p, 0.0, wall));
      return out;
    });

    double mean_fit = 0.0, mean_scm = 0.0, mean_shrunk = 0.0;
    for (const auto& tr : trial_rows) {
      mean_fit += tr[0].value;
      mean_scm += tr[1].value;
      mean_shrunk += tr[2].value;
      if (cfg.per_trial_rows) rows.insert(rows.end(), tr.begin(), tr.end());
    }
    rows.push_back(make_row(p, 0, n, "mean", "proposed-fit", mean_fit / cfg.trials, 0.0));
    rows.push_back(make_row(p, 0, n, "mean", "scm", mean_scm / cfg.trials, 0.0));
    rows.push_back(make_row(p, 0, n, "mean", "shrinkage-init", mean_shrunk / cfg.trials, 0.0));
  }
  return rows;
}

std::vector<ResultRow> run_oracle_check(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<ResultRow> rows;
  std::uint64_t block = 0;
  for (int p : cfg.p_list) {
    const int n1 = 3 * p + 7;
    const int n2 = 5 * p + 11;
    const std::uint64_t block_base = block;
    auto trial_rows = parallel_map(cfg.trials, cfg.workers, [&](int t) {
      std::mt19937_64 gen(derive_seed(cfg.seed, block_base + t));
      std::uniform_real_distribution<double> uni(0.1, 5.0);
      std::vector<double> vals(p);
      for (auto& v : vals) v = uni(gen);
      std::sort(vals.begin(), vals.end());
      Vector lambda(p);
      for (int i = 0; i < p; ++i) lambda(i) = vals[i];
      const ProductSpectrum s = build_spectrum(lambda, n1, n2);
      const double oracle = contour_functional_oracle(
          s, [](std::complex<double> z) { return z; });
      const double truth = lambda.mean();
      std::vector<ResultRow> out;
      out.push_back(make_row(p, n1, n2, std::to_string(t), "contour-oracle", oracle, truth));
      return out;
    });
    block += cfg.trials;

    double mean_oracle = 0.0, mean_truth = 0.0;
    for (const auto& tr : trial_rows) {
      mean_oracle += tr[0].value;
      mean_truth += tr[0].true_value;
      rows.insert(rows.end(), tr.begin(), tr.end());
    }
    rows.push_back(make_row(p, n1, n2, "mean", "contour-oracle", mean_oracle / cfg.trials,
                            mean_truth / cfg.trials));
  }
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentConfig::Kind::table1: return run_table1(cfg);
    case ExperimentConfig::Kind::figure2: return run_figure2(cfg);
    case ExperimentConfig::Kind::oracle_check: return run_oracle_check(cfg);
  }
  throw_invalid("run_experiment: unreachable kind");
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  // wall_time stays out of the CSV: output bytes must be reproducible for a
  // fixed (config, seed) regardless of machine load or worker count.
  std::ostringstream out;
  out << "p,n1,n2,trial,method,value,true_value,rel_error\n";
  for (const auto& r : rows) {
    out << r.p << ',' << r.n1 << ',' << r.n2 << ',' << r.trial << ',' << r.method
        << ',' << format_double(r.value) << ',' << format_double(r.true_value)
        << ',' << format_double(r.rel_error) << '\n';
  }
  return out.str();
}

void write_rows_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_invalid("harness: cannot write '" + path + "'");
  out << rows_to_csv(rows);
}

}  // namespace specdist
