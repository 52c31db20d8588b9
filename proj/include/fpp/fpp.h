/*
 * C interface to the first-passage percolation laboratory.
 *
 * Every fallible call returns an fpp_status; on failure the message is
 * available from fpp_last_error() on the same thread until the next call.
 * Objects are opaque handles released with their *_destroy function
 * (passing NULL is a no-op). Strings returned through char** are owned by
 * the caller and released with fpp_string_free.
 */
#ifndef FPP_FPP_H
#define FPP_FPP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FPP_BUILDING_LIBRARY)
#    define FPP_API __declspec(dllexport)
#  else
#    define FPP_API __declspec(dllimport)
#  endif
#else
#  define FPP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpp_status {
  FPP_OK = 0,
  FPP_ERR_DOMAIN = 1,
  FPP_ERR_QUADRATURE = 2,
  FPP_ERR_INVERSION = 3,
  FPP_ERR_UNSUPPORTED = 4,
  FPP_ERR_INSUFFICIENT_SAMPLES = 5,
  FPP_ERR_ZERO_VARIANCE = 6,
  FPP_ERR_CONFIG = 7,
  FPP_ERR_IO = 8,
  FPP_ERR_INVALID_ARGUMENT = 9, /* NULL pointer or bad enum value */
  FPP_ERR_INTERNAL = 10
} fpp_status;

FPP_API const char* fpp_last_error(void);
FPP_API const char* fpp_status_name(fpp_status status);
FPP_API const char* fpp_version(void);
FPP_API void fpp_string_free(char* s);

/* ---- theory ------------------------------------------------------------ */

typedef struct fpp_hop_minimizer {
  int k_star;
  double g_star;
  int is_special;
  int pair_lo; /* competing pair when is_special, else 0 */
  int pair_hi;
} fpp_hop_minimizer;

FPP_API fpp_status fpp_gs(double s, double x, double* out);
FPP_API fpp_status fpp_special_point(int j, double* out);
FPP_API fpp_status fpp_k_star(double s, fpp_hop_minimizer* out);
FPP_API fpp_status fpp_a_coeff(double s, int k, double* out);
FPP_API fpp_status fpp_log_fk_tail_asymptotic(double s, int k, double z, double* out);
FPP_API fpp_status fpp_centering_z(double s, int k, long long n, double t, double* out);
FPP_API fpp_status fpp_standardize_weight(double s, int k, long long n, double weight, double* out);
FPP_API fpp_status fpp_gumbel_rate(double s, int k, double t, double* out);
FPP_API fpp_status fpp_gumbel_sf(double s, int k, double t, double* out);
FPP_API fpp_status fpp_independent_min_sf(double s, int k, double t, double* out);
FPP_API fpp_status fpp_correlated_tail_exponent(double s, int k, int j, double* out);
FPP_API fpp_status fpp_poisson_condition(double s, int k, int j, int* holds, double* margin);

/* ---- numerics ---------------------------------------------------------- */

typedef enum fpp_transform { FPP_TRANSFORM_LOG = 0, FPP_TRANSFORM_LINEAR = 1 } fpp_transform;

typedef struct fpp_quadrature {
  int node_count;
  double tolerance;
  fpp_transform transform;
} fpp_quadrature;

FPP_API void fpp_quadrature_default(fpp_quadrature* q);

/* q may be NULL for the defaults. */
FPP_API fpp_status fpp_log_fk_numeric(double s, int k, double z, const fpp_quadrature* q,
                                      double* out);
FPP_API fpp_status fpp_min_quantile(double s, int k, double log_m, double u,
                                    const fpp_quadrature* q, double* out);
FPP_API fpp_status fpp_log_joint_tail(double s, int len1, int len2, int shared, double z1,
                                      double z2, const fpp_quadrature* q, double* out);
/* ordered != 0 counts k-edge paths as ordered vertex sequences. */
FPP_API fpp_status fpp_hop_split_probability(double s, int ordered, double* p_floor,
                                             double* p_ceil);

/* ---- simulation -------------------------------------------------------- */

typedef struct fpp_weight_model fpp_weight_model;
typedef struct fpp_path fpp_path;

FPP_API fpp_status fpp_weight_model_create(double s, uint64_t seed, fpp_weight_model** out);
FPP_API void fpp_weight_model_destroy(fpp_weight_model* m);
FPP_API fpp_status fpp_edge_weight(const fpp_weight_model* m, int i, int j, double* out);

FPP_API fpp_status fpp_shortest_path(const fpp_weight_model* m, int n, int src, int dst,
                                     fpp_path** out);
FPP_API void fpp_path_destroy(fpp_path* p);
FPP_API double fpp_path_weight(const fpp_path* p);
FPP_API int fpp_path_hopcount(const fpp_path* p);
FPP_API size_t fpp_path_vertex_count(const fpp_path* p);
/* Copies min(cap, count) vertices. */
FPP_API fpp_status fpp_path_vertices(const fpp_path* p, int* buf, size_t cap);

FPP_API fpp_status fpp_min_two_edge(const fpp_weight_model* m, int n, double* out);
FPP_API fpp_status fpp_count_paths_below(const fpp_weight_model* m, int n, int k, double z,
                                         uint64_t* out);
/* weights and hopcounts (either may be NULL) receive m entries, targets 2..m+1. */
FPP_API fpp_status fpp_multipoint_weights(const fpp_weight_model* model, int n, int m,
                                          double* weights, int* hopcounts);
/* count draws of the minimum of n^{k-1} i.i.d. Z_k, n given as log n. */
FPP_API fpp_status fpp_sample_min_independent(double s, int k, double log_n, uint64_t seed,
                                              uint64_t stream, size_t count, double* out);

/* ---- statistics -------------------------------------------------------- */

FPP_API fpp_status fpp_ks_gumbel(const double* t, size_t count, double s, int k, double* out);
FPP_API fpp_status fpp_poisson_tv(const uint64_t* counts, size_t count, double mean,
                                  double* out);
FPP_API fpp_status fpp_pairwise_correlation(const double* x, const double* y, size_t count,
                                            double* out);

/* ---- run configuration ------------------------------------------------- */

typedef struct fpp_config fpp_config;
typedef enum fpp_format { FPP_FORMAT_CSV = 0, FPP_FORMAT_JSON = 1 } fpp_format;

FPP_API fpp_status fpp_config_create(fpp_config** out);
FPP_API fpp_status fpp_config_from_json(const char* text, fpp_config** out);
FPP_API fpp_status fpp_config_load(const char* path, fpp_config** out);
FPP_API void fpp_config_destroy(fpp_config* c);
FPP_API fpp_status fpp_config_to_json(const fpp_config* c, char** out);
FPP_API fpp_status fpp_config_set_s_values(fpp_config* c, const double* s, size_t count);
FPP_API fpp_status fpp_config_set_n_values(fpp_config* c, const long long* n, size_t count);
FPP_API fpp_status fpp_config_set_replications(fpp_config* c, int reps);
FPP_API fpp_status fpp_config_set_seed(fpp_config* c, uint64_t seed);
FPP_API fpp_status fpp_config_set_output_path(fpp_config* c, const char* path);
FPP_API fpp_status fpp_config_set_jobs(fpp_config* c, unsigned jobs);
FPP_API fpp_status fpp_config_set_format(fpp_config* c, fpp_format format);
FPP_API fpp_status fpp_config_set_quadrature(fpp_config* c, const fpp_quadrature* q);
FPP_API fpp_status fpp_config_validate(const fpp_config* c);

/* Write a run directory; records may be NULL. */
FPP_API fpp_status fpp_run_simulate(const fpp_config* c, size_t* records);
FPP_API fpp_status fpp_run_sweep(const fpp_config* c, size_t* records);

/* ---- acceptance suite -------------------------------------------------- */

typedef struct fpp_report_set fpp_report_set;

typedef struct fpp_report {
  const char* test_name; /* borrowed from the report set */
  double statistic;
  double threshold;
  int pass;
  long long sample_size;
  const char* note;
} fpp_report;

/* NULL past the last suite. */
FPP_API const char* fpp_suite_name(size_t i);
FPP_API uint64_t fpp_default_validation_seed(void);

/* out_dir may be NULL; otherwise reports.json is written there. */
FPP_API fpp_status fpp_validate(const char* suite, uint64_t seed, unsigned jobs,
                                const char* out_dir, fpp_report_set** out);
FPP_API fpp_status fpp_validate_criterion(int id, uint64_t seed, unsigned jobs,
                                          fpp_report_set** out);
FPP_API void fpp_report_set_destroy(fpp_report_set* r);
FPP_API int fpp_report_set_pass(const fpp_report_set* r);
FPP_API size_t fpp_report_set_criterion_count(const fpp_report_set* r);
FPP_API fpp_status fpp_report_set_criterion(const fpp_report_set* r, size_t i, int* id,
                                            const char** title, int* pass, double* seconds,
                                            size_t* report_count);
FPP_API fpp_status fpp_report_set_report(const fpp_report_set* r, size_t i, size_t j,
                                         fpp_report* out);
FPP_API fpp_status fpp_report_set_to_json(const fpp_report_set* r, char** out);

#ifdef __cplusplus
}
#endif

#endif /* FPP_FPP_H */
