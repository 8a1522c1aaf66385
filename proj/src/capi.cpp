#include "specdist/specdist.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "specdist/csv.hpp"
#include "specdist/estimators.hpp"
#include "specdist/harness.hpp"
#include "specdist/known_population.hpp"
#include "specdist/models.hpp"

struct specdist_matrix {
  specdist::Matrix m;
};

namespace {

thread_local std::string g_last_error;

specdist_status to_status(const specdist::Error& e) {
  g_last_error = e.what();
  switch (e.kind()) {
    case specdist::ErrorKind::parse: return SPECDIST_ERR_PARSE;
    case specdist::ErrorKind::regime: return SPECDIST_ERR_REGIME;
    case specdist::ErrorKind::numeric: return SPECDIST_ERR_NUMERIC;
    case specdist::ErrorKind::invalid_input: return SPECDIST_ERR_INVALID;
  }
  return SPECDIST_ERR_INVALID;
}

template <typename Fn>
specdist_status guarded(Fn&& fn) {
  try {
    fn();
    return SPECDIST_OK;
  } catch (const specdist::Error& e) {
    return to_status(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPECDIST_ERR_INVALID;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json estimate_to_json(const specdist::DistanceEstimate& e) {
  nlohmann::json j;
  j["method"] = e.method;
  j["value"] = e.value;
  j["diagnostics"] = nlohmann::json::parse(e.diagnostics.to_json_text());
  return j;
}

}  // namespace

extern "C" {

const char* specdist_last_error(void) { return g_last_error.c_str(); }

void specdist_string_free(char* s) { delete[] s; }

specdist_status specdist_matrix_create(size_t rows, size_t cols,
                                       const double* data,
                                       specdist_matrix** out) {
  return guarded([&] {
    if (!data || !out || rows == 0 || cols == 0)
      specdist::throw_invalid("matrix_create: null or empty arguments");
    specdist::Matrix m = Eigen::Map<const specdist::Matrix>(data, rows, cols);
    if (!specdist::all_finite(m))
      specdist::throw_invalid("matrix_create: input contains non-finite values");
    *out = new specdist_matrix{std::move(m)};
  });
}

specdist_status specdist_matrix_read_csv(const char* path, specdist_matrix** out) {
  return guarded([&] {
    if (!path || !out) specdist::throw_invalid("matrix_read_csv: null arguments");
    auto* h = new specdist_matrix;
    try {
      h->m = specdist::read_matrix_csv(path);
    } catch (...) {
      delete h;
      throw;
    }
    *out = h;
  });
}

specdist_status specdist_matrix_write_csv(const specdist_matrix* m, const char* path) {
  return guarded([&] {
    if (!m || !path) specdist::throw_invalid("matrix_write_csv: null arguments");
    specdist::write_matrix_csv(m->m, path);
  });
}

size_t specdist_matrix_rows(const specdist_matrix* m) {
  return m ? static_cast<size_t>(m->m.rows()) : 0;
}

size_t specdist_matrix_cols(const specdist_matrix* m) {
  return m ? static_cast<size_t>(m->m.cols()) : 0;
}

specdist_status specdist_matrix_copy_data(const specdist_matrix* m, double* data) {
  return guarded([&] {
    if (!m || !data) specdist::throw_invalid("matrix_copy_data: null arguments");
    Eigen::Map<specdist::Matrix>(data, m->m.rows(), m->m.cols()) = m->m;
  });
}

void specdist_matrix_free(specdist_matrix* m) { delete m; }

specdist_status specdist_model_realize(const char* model_json, specdist_matrix** out) {
  return guarded([&] {
    if (!model_json || !out) specdist::throw_invalid("model_realize: null arguments");
    auto model = specdist::CovarianceModel::from_json_text(model_json);
    *out = new specdist_matrix{specdist::realize_model(model)};
  });
}

specdist_status specdist_model_sample(const char* model_json, size_t n,
                                      uint64_t seed, specdist_matrix** out) {
  return guarded([&] {
    if (!model_json || !out) specdist::throw_invalid("model_sample: null arguments");
    auto model = specdist::CovarianceModel::from_json_text(model_json);
    *out = new specdist_matrix{
        specdist::gaussian_samples(model, static_cast<int>(n), seed)};
  });
}

specdist_status specdist_true_wasserstein(const specdist_matrix* c1,
                                          const specdist_matrix* c2, double* out) {
  return guarded([&] {
    if (!c1 || !c2 || !out) specdist::throw_invalid("true_wasserstein: null arguments");
    *out = specdist::true_wasserstein(c1->m, c2->m);
  });
}

specdist_status specdist_estimate(const specdist_matrix* x1,
                                  const specdist_matrix* x2, char** report_json) {
  return guarded([&] {
    if (!x1 || !x2 || !report_json) specdist::throw_invalid("estimate: null arguments");
    nlohmann::json j;
    j["p"] = x1->m.rows();
    j["n1"] = x1->m.cols();
    j["n2"] = x2->m.cols();
    j["estimates"] = nlohmann::json::array(
        {estimate_to_json(specdist::estimate_wasserstein(x1->m, x2->m)),
         estimate_to_json(specdist::plugin_wasserstein(x1->m, x2->m)),
         estimate_to_json(specdist::estimate_frobenius(x1->m, x2->m)),
         estimate_to_json(specdist::plugin_frobenius(x1->m, x2->m))});
    *report_json = dup_string(j.dump(2));
  });
}

specdist_status specdist_fit(const specdist_matrix* x2, const char* options_json,
                             specdist_matrix** fitted, char** trace_csv,
                             char** summary_json) {
  return guarded([&] {
    if (!x2 || !fitted) specdist::throw_invalid("fit: null arguments");
    specdist::DescentOptions opts;
    if (options_json && options_json[0]) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(options_json);
      } catch (const nlohmann::json::exception& e) {
        specdist::throw_parse(std::string("fit: bad options JSON: ") + e.what());
      }
      opts.grad_tol = j.value("grad_tol", opts.grad_tol);
      opts.h_tol = j.value("h_tol", opts.h_tol);
      opts.max_iterations = j.value("max_iterations", opts.max_iterations);
      opts.armijo = j.value("armijo", opts.armijo);
      opts.shrink = j.value("shrink", opts.shrink);
      opts.initial_step = j.value("initial_step", opts.initial_step);
      opts.max_halvings = j.value("max_halvings", opts.max_halvings);
    }
    specdist::FitResult result = specdist::fit_covariance(x2->m, opts);

    if (trace_csv) {
      std::string csv = "iteration,h,grad_norm,step\n";
      for (const auto& st : result.trace) {
        csv += std::to_string(st.iteration) + ',' + specdist::format_double(st.h_value) +
               ',' + specdist::format_double(st.grad_norm) + ',' +
               specdist::format_double(st.step) + '\n';
      }
      *trace_csv = dup_string(csv);
    }
    if (summary_json) {
      const auto& last = result.trace.back();
      nlohmann::json j;
      j["h"] = last.h_value;
      j["grad_norm"] = last.grad_norm;
      j["iterations"] = last.iteration;
      j["stalled"] = result.stalled;
      j["converged"] = result.converged;
      *summary_json = dup_string(j.dump(2));
    }
    *fitted = new specdist_matrix{std::move(result.M)};
  });
}

specdist_status specdist_run_experiment(const char* config_json, char** csv_out) {
  return guarded([&] {
    if (!config_json || !csv_out)
      specdist::throw_invalid("run_experiment: null arguments");
    auto cfg = specdist::ExperimentConfig::from_json_text(config_json);
    auto rows = specdist::run_experiment(cfg);
    *csv_out = dup_string(specdist::rows_to_csv(rows));
  });
}

}  // extern "C"
