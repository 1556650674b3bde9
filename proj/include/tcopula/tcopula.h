#ifndef TCOPULA_H
#define TCOPULA_H

/*
 * C interface to the tcopula library: correlated Student-t pair generation
 * (same-chi2, indep-chi2, correlated-t), closed-form correlation and
 * tail-correlation quantities, streaming estimators and CSV reports.
 *
 * Every fallible call returns a tc_status. On failure a one-line message
 * is available from tc_last_error() until the next call on the same
 * thread. Handles are opaque and must be released with their _destroy
 * function; passing NULL to a _destroy function is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TCOPULA_BUILDING_LIBRARY)
#    define TCOPULA_API __declspec(dllexport)
#  else
#    define TCOPULA_API __declspec(dllimport)
#  endif
#else
#  define TCOPULA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tc_status {
    TC_OK = 0,
    TC_ERR_DOMAIN = 1,           /* parameter outside the operation's domain */
    TC_ERR_INVALID_ARGUMENT = 2, /* malformed request, NULL pointer, bad text */
    TC_ERR_UNDEFINED = 3,        /* statistic undefined for the data seen */
    TC_ERR_IO = 4,
    TC_ERR_INTERNAL = 5
} tc_status;

typedef enum tc_method {
    TC_METHOD_SAME_CHI2 = 0,
    TC_METHOD_INDEP_CHI2 = 1,
    TC_METHOD_CORRELATED_T = 2
} tc_method;

typedef enum tc_std_mode {
    TC_STD_UNIT = 0,     /* threshold = gamma */
    TC_STD_STUDENT_T = 1 /* threshold = gamma * sqrt(nu/(nu-2)) */
} tc_std_mode;

typedef enum tc_scale { TC_SCALE_RAW = 0, TC_SCALE_COPULA = 1 } tc_scale;

typedef struct tc_config {
    tc_method method;
    double rho;
    double nu;
    uint64_t n_samples;
    uint64_t seed;
} tc_config;

typedef struct tc_run_options {
    tc_config config;
    int gamma_max;
    tc_std_mode std_mode;
    tc_scale scale;
    size_t bins_x;
    size_t bins_y;
    double range_lo;
    double range_hi;
    unsigned threads;      /* 0 = hardware concurrency */
    const char* timestamp; /* NULL or "" = omit from manifest */
} tc_run_options;

TCOPULA_API const char* tc_version(void);
TCOPULA_API const char* tc_last_error(void);
TCOPULA_API const char* tc_status_name(tc_status status);

/* Defaults: same-chi2, rho 0.9, nu 3, 10^6 samples, seed 1, gamma 2..20,
 * unit thresholds, raw 100x100 grid on [-10,10]^2. */
TCOPULA_API void tc_config_default(tc_config* config);
TCOPULA_API void tc_run_options_default(tc_run_options* options);
TCOPULA_API tc_status tc_config_validate(const tc_config* config);

TCOPULA_API tc_status tc_method_parse(const char* text, tc_method* out);
TCOPULA_API const char* tc_method_name(tc_method method);
TCOPULA_API tc_status tc_std_mode_parse(const char* text, tc_std_mode* out);
TCOPULA_API tc_status tc_scale_parse(const char* text, tc_scale* out);

/* ---- Closed-form analytics ---- */

TCOPULA_API tc_status tc_inverse_chi_moment(double nu, int k, double* out);
TCOPULA_API tc_status tc_correlation_reduction_factor(double nu, double* out);
TCOPULA_API tc_status tc_correlation_reduction_asymptotic(double nu, double* out);
TCOPULA_API tc_status tc_effective_correlation(double rho, double nu, double* out);
TCOPULA_API tc_status tc_power_law_tail_variance(double n_exponent, double mu, double* out);
TCOPULA_API tc_status tc_t_tail_variance(double nu, double mu, double* out);
TCOPULA_API double tc_normal_pdf(double x);
TCOPULA_API double tc_normal_cdf(double x);
TCOPULA_API double tc_normal_tail_variance(double mu);
TCOPULA_API tc_status tc_tail_correlation_model(double v_tail, double k_prime, double* out);
TCOPULA_API tc_status tc_correlated_t_tail_correlation(double rho, double nu, double mu, double* out);

/* ---- Pair generation ---- */

typedef struct tc_generator tc_generator;

TCOPULA_API tc_status tc_generator_create(const tc_config* config, tc_generator** out);
TCOPULA_API void tc_generator_destroy(tc_generator* gen);
/* TC_ERR_INVALID_ARGUMENT once all n_samples draws have been produced. */
TCOPULA_API tc_status tc_generator_next(tc_generator* gen, double* u, double* v);
/* Writes up to `capacity` pairs; *written receives the count (0 at the end). */
TCOPULA_API tc_status tc_generator_fill(tc_generator* gen, double* u, double* v, size_t capacity,
                                        size_t* written);
TCOPULA_API tc_status tc_generator_seek(tc_generator* gen, uint64_t index);
TCOPULA_API uint64_t tc_generator_position(const tc_generator* gen);

/* ---- Estimators ---- */

typedef struct tc_accumulator tc_accumulator;

TCOPULA_API tc_status tc_accumulator_create(tc_accumulator** out);
TCOPULA_API void tc_accumulator_destroy(tc_accumulator* acc);
TCOPULA_API tc_status tc_accumulator_add(tc_accumulator* acc, double u, double v);
TCOPULA_API tc_status tc_accumulator_add_many(tc_accumulator* acc, const double* u, const double* v,
                                              size_t n);
TCOPULA_API tc_status tc_accumulator_merge(tc_accumulator* into, const tc_accumulator* from);
TCOPULA_API uint64_t tc_accumulator_count(const tc_accumulator* acc);
TCOPULA_API tc_status tc_accumulator_means(const tc_accumulator* acc, double* mean_u, double* mean_v);
/* TC_ERR_UNDEFINED when count < 2 or a margin is constant. */
TCOPULA_API tc_status tc_accumulator_correlation(const tc_accumulator* acc, double* out);

/* Conditional correlation corr(U, V | U > gamma*std) over n pairs.
 * *subsample receives the conditioning count; TC_ERR_UNDEFINED below 10. */
TCOPULA_API tc_status tc_tail_correlation(const double* u, const double* v, size_t n, double gamma,
                                          double std, double* out, uint64_t* subsample);
TCOPULA_API tc_status tc_tail_count(const double* u, const double* v, size_t n, double gamma,
                                    double std, uint64_t* out);

/* ---- CSV reports. path NULL, "" or "-" writes to stdout; files are
 * written atomically and left untouched on failure. ---- */

TCOPULA_API tc_status tc_write_reduction_table(const double* nus, size_t n, const char* timestamp,
                                               const char* path);
TCOPULA_API tc_status tc_write_tail_table(const tc_run_options* options, const char* path);
TCOPULA_API tc_status tc_write_tail_counts(const tc_run_options* options, const char* path);
TCOPULA_API tc_status tc_write_samples(const tc_run_options* options, const char* path);
TCOPULA_API tc_status tc_write_density(const tc_run_options* options, const char* path);
TCOPULA_API tc_status tc_write_tail_curve(double rho, double nu, const double* mus, size_t n,
                                          const char* timestamp, const char* path);
TCOPULA_API tc_status tc_write_tail_scatter(const tc_run_options* options, double gamma,
                                            const char* path);

#ifdef __cplusplus
}
#endif

#endif /* TCOPULA_H */
