#ifndef SPECDIST_HARNESS_HPP
#define SPECDIST_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specdist/models.hpp"

namespace specdist {

// Monte Carlo experiment description. Trials draw independent seed streams
// via derive_seed(seed, trial_index), so results do not depend on worker
// scheduling.
struct ExperimentConfig {
  enum class Kind { table1, figure2, oracle_check };

  Kind kind = Kind::table1;
  std::vector<int> p_list;       // table1 / oracle-check
  std::vector<int> n_list;       // figure2
  int n1 = 1024;
  int n2 = 2048;
  int trials = 100;
  std::uint64_t seed = 1;
  int workers = 1;
  bool per_trial_rows = false;
  std::optional<CovarianceModel> model_c1;  // defaults depend on experiment
  std::optional<CovarianceModel> model_c2;

  static ExperimentConfig table1_defaults();
  static ExperimentConfig figure2_defaults();
  static ExperimentConfig oracle_check_defaults();

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

struct ResultRow {
  int p = 0;
  int n1 = 0;
  int n2 = 0;
  std::string trial;  // index or "mean"
  std::string method;
  double value = 0.0;
  double true_value = 0.0;
  double rel_error = 0.0;
  double wall_time = 0.0;  // seconds
};

std::vector<ResultRow> run_table1(const ExperimentConfig& cfg);
std::vector<ResultRow> run_figure2(const ExperimentConfig& cfg);
std::vector<ResultRow> run_oracle_check(const ExperimentConfig& cfg);
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
void write_rows_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace specdist

#endif
