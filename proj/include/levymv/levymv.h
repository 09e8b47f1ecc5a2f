/* C interface to the levymv library: opaque handles and status codes.
 * Every function that can fail returns an lmv_status; on failure
 * lmv_last_error() holds a message for the calling thread. */
#ifndef LEVYMV_H
#define LEVYMV_H

#include <stddef.h>
#include <stdint.h>

#if defined(LEVYMV_BUILD)
#define LMV_API __attribute__((visibility("default")))
#else
#define LMV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lmv_status {
    LMV_OK = 0,
    LMV_INVALID_ARGUMENT = 1,
    LMV_DIVERGENT_MOMENT = 2,
    LMV_INVALID_REGION = 3,
    LMV_INFINITE_OVERLAP = 4,
    LMV_QUADRATURE_FAILURE = 5,
    LMV_DIMENSION_MISMATCH = 6,
    LMV_EMPTY_MEASURE = 7,
    LMV_UNSUPPORTED_FAMILY = 8,
    LMV_CASE_VIOLATION = 9,
    LMV_NOT_IN_THETA = 10,
    LMV_BLOWUP = 11,
    LMV_NOISE_FLOOR_EXCEEDS_TOL = 12,
    LMV_SIGMA_VIOLATES_H2 = 13,
    LMV_ZERO_OVERLAP = 14,
    LMV_GRID_TOO_COARSE = 15,
    LMV_NO_TRANSITION = 16,
    LMV_IO = 17,
    LMV_INTERNAL = 100
} lmv_status;

typedef struct lmv_config lmv_config;
typedef struct lmv_result lmv_result;
typedef struct lmv_levy lmv_levy;
typedef struct lmv_measure lmv_measure;

LMV_API const char* lmv_version(void);
LMV_API const char* lmv_last_error(void);
LMV_API const char* lmv_status_name(lmv_status status);
/* Nonzero for numerical failures (blow-up, quadrature, root-grid, overlap),
 * zero for input validation failures. */
LMV_API int lmv_status_is_numerical(lmv_status status);

/* ---- experiment configuration ---- */
LMV_API lmv_status lmv_config_parse(const char* json, lmv_config** out);
LMV_API lmv_status lmv_config_default(lmv_config** out);
LMV_API void lmv_config_free(lmv_config* cfg);
LMV_API lmv_status lmv_config_set_threads(lmv_config* cfg, int threads);
LMV_API lmv_status lmv_config_set_gamma(lmv_config* cfg, double gamma);
LMV_API lmv_status lmv_config_set_beta(lmv_config* cfg, double beta);
/* "lo:hi:step", inclusive. */
LMV_API lmv_status lmv_config_set_beta_scan(lmv_config* cfg, const char* scan);
LMV_API lmv_status lmv_config_set_output_dir(lmv_config* cfg, const char* dir);
/* Empty string when the configuration names no output directory. */
LMV_API const char* lmv_config_output_dir(const lmv_config* cfg);
/* Caller frees the string with lmv_string_free. */
LMV_API lmv_status lmv_config_resolved_json(const lmv_config* cfg, char** out);
LMV_API void lmv_string_free(char* s);

/* ---- runs ---- */
/* subcommand: sample, simulate, fixpoint, multiplicity, check, selfconsistent, constants */
LMV_API lmv_status lmv_run(const lmv_config* cfg, const char* subcommand, lmv_result** out);
LMV_API void lmv_result_free(lmv_result* result);
LMV_API const char* lmv_result_report(const lmv_result* result);
LMV_API int lmv_result_condition_failed(const lmv_result* result);
LMV_API size_t lmv_result_artifact_count(const lmv_result* result);
LMV_API const char* lmv_result_artifact_name(const lmv_result* result, size_t i);
LMV_API const char* lmv_result_artifact_data(const lmv_result* result, size_t i, size_t* len);

/* ---- Levy measures ---- */
/* kind: isotropic_stable, truncated_stable, compound_poisson */
LMV_API lmv_status lmv_levy_create(const char* kind, double alpha, double scale, int dim, double cutoff, double rate,
                                   double jump_std, lmv_levy** out);
LMV_API void lmv_levy_free(lmv_levy* levy);
/* complement != 0: nu(|z|^p 1{|z| > l}); otherwise nu(|z|^p 1{|z| <= l}). */
LMV_API lmv_status lmv_levy_tail_moment(const lmv_levy* levy, double p, int complement, double l, double* out);
LMV_API lmv_status lmv_levy_overlap_J(const lmv_levy* levy, double r, double* out);
/* n increments over dt into out[n * dim], stream (seed, stream_id). */
LMV_API lmv_status lmv_levy_sample(const lmv_levy* levy, double dt, uint64_t seed, uint64_t stream_id, size_t n,
                                   double* out);

/* ---- empirical measures ---- */
/* weights may be NULL for uniform weights. */
LMV_API lmv_status lmv_measure_create(int dim, size_t n, const double* points, const double* weights,
                                      lmv_measure** out);
LMV_API void lmv_measure_free(lmv_measure* mu);
LMV_API lmv_status lmv_measure_w1(const lmv_measure* a, const lmv_measure* b, double* out);
LMV_API lmv_status lmv_measure_moment(const lmv_measure* mu, double p, double* out);

/* ---- self-consistent gradient case ---- */
LMV_API lmv_status lmv_h(double gamma, double beta, double m, double* out);
/* m_max <= 0 selects an automatic bound. */
LMV_API lmv_status lmv_root_count(double gamma, double beta, double m_max, int grid_n, int* count);
LMV_API lmv_status lmv_beta_c(double gamma, double tol, double* beta_c, int* above_gamma_c);

#ifdef __cplusplus
}
#endif

#endif
