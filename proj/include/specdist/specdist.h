/*
 * specdist C API.
 *
 * Spectral-functional estimation for products of covariance matrices:
 * consistent Wasserstein / Frobenius distance estimates between centered
 * Gaussians from sample data in the p ~ n regime, plus covariance fitting
 * by Riemannian gradient descent against the known-population estimator.
 *
 * All functions return a status code (specdist_status). On failure a
 * human-readable message is available via specdist_last_error(), which is
 * thread-local. Out-pointers are written only on SPECDIST_OK.
 *
 * Matrices travel through opaque handles. Strings returned through char**
 * out-parameters are heap-allocated and must be released with
 * specdist_string_free().
 */
#ifndef SPECDIST_SPECDIST_H
#define SPECDIST_SPECDIST_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum specdist_status {
  SPECDIST_OK = 0,
  SPECDIST_ERR_INVALID = 1, /* bad arguments, non-finite or non-SPD input */
  SPECDIST_ERR_PARSE = 2,   /* malformed CSV or JSON */
  SPECDIST_ERR_REGIME = 3,  /* p/n growth-rate assumption violated */
  SPECDIST_ERR_NUMERIC = 4  /* quadrature or iteration did not converge */
} specdist_status;

typedef struct specdist_matrix specdist_matrix;

/* Thread-local message for the most recent failure in this thread. */
const char* specdist_last_error(void);

void specdist_string_free(char* s);

/* ---- matrices ------------------------------------------------------ */

/* Dense column-major buffer of rows x cols doubles. */
specdist_status specdist_matrix_create(size_t rows, size_t cols,
                                       const double* data,
                                       specdist_matrix** out);
/* Plain CSV, rows x cols, no header; ragged rows are a parse error. */
specdist_status specdist_matrix_read_csv(const char* path,
                                         specdist_matrix** out);
specdist_status specdist_matrix_write_csv(const specdist_matrix* m,
                                          const char* path);
size_t specdist_matrix_rows(const specdist_matrix* m);
size_t specdist_matrix_cols(const specdist_matrix* m);
/* Copies the column-major contents into data (rows*cols doubles). */
specdist_status specdist_matrix_copy_data(const specdist_matrix* m,
                                          double* data);
void specdist_matrix_free(specdist_matrix* m);

/* Realize a covariance model described as JSON:
 * {"kind":"toeplitz","p":int,"r":double}
 * {"kind":"atomic","p":int,"atoms":[[value,mult],...],"basis_seed":int}
 * {"kind":"explicit","matrix":[[...],...]}                              */
specdist_status specdist_model_realize(const char* model_json,
                                       specdist_matrix** out);
/* n seeded i.i.d. Gaussian columns with the model covariance. */
specdist_status specdist_model_sample(const char* model_json, size_t n,
                                      uint64_t seed, specdist_matrix** out);

/* ---- distances ----------------------------------------------------- */

/* Population formula tr(C1)+tr(C2)-2 tr[(C1^{1/2} C2 C1^{1/2})^{1/2}]. */
specdist_status specdist_true_wasserstein(const specdist_matrix* c1,
                                          const specdist_matrix* c2,
                                          double* out);

/* Estimate distances between the populations behind two p x n sample
 * blocks (columns are observations). Writes a JSON report containing
 * rmt-wasserstein, plugin-wasserstein, rmt-frobenius, plugin-frobenius
 * and quadrature diagnostics. */
specdist_status specdist_estimate(const specdist_matrix* x1,
                                  const specdist_matrix* x2,
                                  char** report_json);

/* ---- covariance fitting -------------------------------------------- */

/* Fit an SPD covariance matrix to one sample block by Riemannian descent,
 * starting from the linear-shrinkage initializer. options_json may be NULL
 * or override {"grad_tol","h_tol","max_iterations","armijo","shrink",
 * "initial_step","max_halvings"}. trace_csv (optional, may be NULL) gets
 * "iteration,h,grad_norm,step" rows; summary_json (optional) reports the
 * final objective, gradient norm and a stalled flag. */
specdist_status specdist_fit(const specdist_matrix* x2,
                             const char* options_json,
                             specdist_matrix** fitted,
                             char** trace_csv,
                             char** summary_json);

/* ---- benchmark experiments ------------------------------------------ */

/* Run a Monte Carlo experiment described by config_json (see the CLI
 * documentation for the schema; "experiment" selects table1, figure2 or
 * oracle-check). The result table is returned as CSV text. */
specdist_status specdist_run_experiment(const char* config_json,
                                        char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* SPECDIST_SPECDIST_H */
