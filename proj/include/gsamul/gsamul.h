/* C interface to the gsamul library. All functions return a status code; on
 * failure gsamul_last_error() describes the problem (thread-local, valid until
 * the next call on the same thread). Strings returned through char** must be
 * released with gsamul_string_free. */
#ifndef GSAMUL_H
#define GSAMUL_H

#include <stddef.h>
#include <stdint.h>

#if defined(GSAMUL_BUILDING_LIBRARY)
#define GSAMUL_API __attribute__((visibility("default")))
#else
#define GSAMUL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gsamul_status {
  GSAMUL_OK = 0,
  GSAMUL_ERR_INVALID_INPUT = 1,
  GSAMUL_ERR_DEGENERATE_STATE = 2,
  GSAMUL_ERR_NUMERICAL_DIVERGENCE = 3,
  GSAMUL_ERR_IO = 4,
  GSAMUL_ERR_DEGENERATE_INPUT = 5,
  GSAMUL_ERR_RUN_FAILED = 6, /* every seed of a run failed; the report is still returned */
  GSAMUL_ERR_INTERNAL = 99
} gsamul_status;

typedef struct gsamul_dataset gsamul_dataset;
typedef struct gsamul_model gsamul_model;
typedef struct gsamul_trace gsamul_trace;

GSAMUL_API const char* gsamul_version(void);
GSAMUL_API const char* gsamul_last_error(void);
GSAMUL_API void gsamul_string_free(char* s);

/* Datasets. X is row-major n x p. */
GSAMUL_API gsamul_status gsamul_dataset_create(const double* X, const double* y, size_t n, size_t p,
                                               gsamul_dataset** out);
GSAMUL_API gsamul_status gsamul_dataset_load_csv(const char* path, const char* target_column, gsamul_dataset** out);
/* example: 0 for A, 1 for B. noiseless != 0 switches the noise off. */
GSAMUL_API gsamul_status gsamul_dataset_synth(int example, size_t n, size_t p, double noise_sd, uint64_t seed,
                                              int noiseless, gsamul_dataset** out);
GSAMUL_API gsamul_status gsamul_dataset_shape(const gsamul_dataset* ds, size_t* n, size_t* p);
GSAMUL_API gsamul_status gsamul_dataset_write_csv(const gsamul_dataset* ds, const char* path);
GSAMUL_API void gsamul_dataset_free(gsamul_dataset* ds);

/* Writes a synthetic draw to csv_path and, when truth_path is non-null, its
 * ground truth as JSON. */
GSAMUL_API gsamul_status gsamul_synth_write(int example, size_t n, size_t p, double noise_sd, uint64_t seed,
                                            const char* csv_path, const char* truth_path);

typedef struct gsamul_train_options {
  double lambda;
  int iters;
  int batch_size;
  double c;
  double l_hat;
  uint64_t seed;
  int identity_link;
  double group_floor;
  int degree;
  int n_basis;
  int hidden;
  int standardize_response;
  int warm_start;
} gsamul_train_options;

GSAMUL_API void gsamul_train_options_default(gsamul_train_options* opts);

/* trace may be null. */
GSAMUL_API gsamul_status gsamul_train(const gsamul_dataset* train, const gsamul_dataset* val,
                                      const gsamul_train_options* opts, gsamul_model** model, gsamul_trace** trace);

GSAMUL_API gsamul_status gsamul_model_features(const gsamul_model* m, size_t* p);
GSAMUL_API gsamul_status gsamul_model_predict(const gsamul_model* m, const double* X, size_t n, size_t p,
                                              double* out);
GSAMUL_API gsamul_status gsamul_model_group_norms(const gsamul_model* m, double* out, size_t p);
GSAMUL_API gsamul_status gsamul_model_to_json(const gsamul_model* m, char** out);
GSAMUL_API gsamul_status gsamul_model_from_json(const char* text, gsamul_model** out);
GSAMUL_API gsamul_status gsamul_model_save(const gsamul_model* m, const char* path);
GSAMUL_API gsamul_status gsamul_model_load(const char* path, gsamul_model** out);
GSAMUL_API void gsamul_model_free(gsamul_model* m);

GSAMUL_API gsamul_status gsamul_trace_length(const gsamul_trace* tr, size_t* n);
GSAMUL_API gsamul_status gsamul_trace_record(const gsamul_trace* tr, size_t i, int* t, double* inner, double* outer,
                                             double* grad_norm_sq);
GSAMUL_API gsamul_status gsamul_trace_min_grad_norm(const gsamul_trace* tr, double* out);
GSAMUL_API gsamul_status gsamul_trace_write_csv(const gsamul_trace* tr, const char* path);
GSAMUL_API gsamul_status gsamul_trace_read_csv(const char* path, gsamul_trace** out);
GSAMUL_API void gsamul_trace_free(gsamul_trace* tr);

/* 0-based feature indices. */
GSAMUL_API gsamul_status gsamul_cohen_kappa(const int* a, size_t na, const int* b, size_t nb, int p, double* out);

/* Runs driven by a key = value config document; *report receives the JSON
 * report whenever the config parses. */
GSAMUL_API gsamul_status gsamul_run_fit(const char* config_text, char** report);
GSAMUL_API gsamul_status gsamul_run_select(const char* config_text, char** report);
GSAMUL_API gsamul_status gsamul_run_summary(const char* run_dir, char** text);

#ifdef __cplusplus
}
#endif

#endif
