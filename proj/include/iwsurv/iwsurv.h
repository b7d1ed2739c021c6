/* C interface to the iwsurv library.
 *
 * Objects are opaque handles created by iws_*_create / iws_fit* and released
 * with the matching iws_*_free. Every fallible call returns an iws_status;
 * on failure iws_last_error() describes the problem (per thread, valid until
 * the next failing call on that thread). Output arguments are only written
 * on success.
 */
#ifndef IWSURV_IWSURV_H
#define IWSURV_IWSURV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(IWS_BUILDING_LIBRARY)
#    define IWS_API __declspec(dllexport)
#  else
#    define IWS_API __declspec(dllimport)
#  endif
#else
#  define IWS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iws_status {
    IWS_OK = 0,
    IWS_ERR_DOMAIN = 1,       /* argument outside its domain */
    IWS_ERR_BRACKET = 2,      /* root not bracketed */
    IWS_ERR_CONVERGENCE = 3,  /* optimizer hit its evaluation cap */
    IWS_ERR_MOMENT = 4,       /* moment does not exist */
    IWS_ERR_FIT = 5,          /* estimation failed */
    IWS_ERR_STUDY = 6,        /* too many failed Monte Carlo replicates */
    IWS_ERR_COEFFICIENTS = 7, /* polynomial hazard not positive on its horizon */
    IWS_ERR_STATISTIC = 8,    /* statistic undefined for this sample */
    IWS_ERR_NULL_ARG = 9,
    IWS_ERR_IO = 10,
    IWS_ERR_INTERNAL = 11
} iws_status;

typedef enum iws_model_kind {
    IWS_MODEL_IW = 0,      /* params (a, b) */
    IWS_MODEL_LL = 1,      /* params (sigma, gamma) */
    IWS_MODEL_POLY = 2,    /* params (c1, c2, c3, t_max) */
    IWS_MODEL_WEIBULL = 3  /* params (u, v) */
} iws_model_kind;

typedef enum iws_function {
    IWS_PDF = 0,
    IWS_CDF = 1,
    IWS_SF = 2,
    IWS_HAZARD = 3,
    IWS_CUM_HAZARD = 4,
    IWS_QUANTILE = 5,
    IWS_MRL = 6
} iws_function;

typedef struct iws_sample iws_sample;
typedef struct iws_model iws_model;
typedef struct iws_rng iws_rng;
typedef struct iws_study iws_study;

IWS_API const char* iws_version(void);
IWS_API const char* iws_last_error(void);
IWS_API const char* iws_status_name(iws_status status);
/* "iw", "ll", "poly", "weibull". */
IWS_API const char* iws_model_kind_name(iws_model_kind kind);
IWS_API iws_status iws_parse_model_kind(const char* name, iws_model_kind* out);

/* ---- random streams ---- */
IWS_API iws_status iws_rng_create(uint64_t seed, iws_rng** out);
IWS_API void iws_rng_free(iws_rng* rng);

/* ---- samples ---- */
IWS_API iws_status iws_sample_create(const double* values, size_t n, iws_sample** out);
/* id is 'A', 'B' or 'C'. */
IWS_API iws_status iws_sample_fixture(char id, iws_sample** out);
IWS_API iws_status iws_sample_read_file(const char* path, iws_sample** out);
IWS_API iws_status iws_sample_write_file(const iws_sample* s, const char* path);
IWS_API void iws_sample_free(iws_sample* s);
IWS_API size_t iws_sample_size(const iws_sample* s);
/* Copies min(capacity, size) sorted values into out. */
IWS_API iws_status iws_sample_values(const iws_sample* s, double* out, size_t capacity);
IWS_API iws_status iws_sample_gamma23(const iws_sample* s, double* cv, double* skewness);

/* ---- models ---- */
IWS_API iws_status iws_model_create(iws_model_kind kind, const double* params, size_t n_params,
                                    iws_model** out);
IWS_API iws_status iws_model_clone(const iws_model* m, iws_model** out);
IWS_API void iws_model_free(iws_model* m);
IWS_API iws_model_kind iws_model_get_kind(const iws_model* m);
/* Returns the number of parameters and copies up to capacity of them. */
IWS_API size_t iws_model_params(const iws_model* m, double* out, size_t capacity);
IWS_API iws_status iws_model_eval(const iws_model* m, iws_function fn, double x, double* out);
/* Draws n values in generation order. */
IWS_API iws_status iws_model_sample(const iws_model* m, size_t n, iws_rng* rng, double* out);
/* MRL at t_R = reference quantile(1 - R); reference may be NULL (use m). */
IWS_API iws_status iws_model_mrl_at_sf(const iws_model* m, double surviving_fraction,
                                       const iws_model* reference, double* out);

typedef struct iws_shape_summary {
    double mode;
    double hazard_upper;
    double hazard_peak;
    int has_mrl_changepoint;
    double mrl_changepoint;
} iws_shape_summary;

IWS_API iws_status iws_iw_shape_summary(double a, double b, iws_shape_summary* out);
IWS_API iws_status iws_iw_gamma23(double b, double* cv, double* skewness);
IWS_API iws_status iws_ll_gamma23(double gamma, double* cv, double* skewness);
IWS_API iws_status iws_lognormal_gamma23(double shape, double* cv, double* skewness);

/* ---- estimation ---- */
/* ML fit. For IWS_MODEL_POLY *boundary_active (may be NULL) reports whether
 * the positivity constraint is active at the optimum. */
IWS_API iws_status iws_fit(iws_model_kind kind, const iws_sample* s, iws_model** out,
                           int* boundary_active);
/* Least-squares cubic cumulative hazard through n_points of the reference
 * Cdf. range is NULL (F_i = i/(n+1)) or two probabilities {lo, hi}.
 * design_rho_sq (may be NULL) receives the regression's own R^2. */
IWS_API iws_status iws_fit_poly_lsq(const iws_model* reference, int n_points, const double* range,
                                    iws_model** out, double* design_rho_sq);
IWS_API iws_status iws_loglik(const iws_model* m, const iws_sample* s, double* out);
IWS_API iws_status iws_rho_sq(const iws_model* m, const iws_sample* s, double* out);

/* ---- goodness of fit ---- */
IWS_API iws_status iws_ad_statistic(const iws_model* m, const iws_sample* s, double* out);
/* Known-parameter p-value from the limiting distribution with finite-n correction. */
IWS_API iws_status iws_ad_known_pvalue(size_t n, double stat, double* out);

typedef struct iws_ad_result {
    double stat;
    double pvalue;
    int reps;
    int discarded;
} iws_ad_result;

/* Parametric bootstrap with refitting. threads = 0 uses every core. */
IWS_API iws_status iws_ad_pvalue_mc(const iws_sample* s, iws_model_kind family, int reps, iws_rng* rng,
                                    unsigned threads, iws_ad_result* out);
/* Monte Carlo p-value against fully specified parameters. */
IWS_API iws_status iws_ad_pvalue_mc_known(const iws_sample* s, const iws_model* m, int reps, iws_rng* rng,
                                          unsigned threads, iws_ad_result* out);

typedef struct iws_fit_report {
    iws_model_kind model;
    double params[4];
    size_t n_params;
    double mll;
    double ad_stat;
    int has_p_value;
    double p_value;
    int has_rho_sq;
    double rho_sq;
} iws_fit_report;

typedef struct iws_verdict {
    iws_fit_report iw;
    iws_fit_report ll;
    iws_model_kind winner_ad;
    iws_model_kind winner_mll;
    int agree;
} iws_verdict;

IWS_API iws_status iws_fit_report_create(iws_model_kind kind, const iws_sample* s, int reps, iws_rng* rng,
                                         unsigned threads, iws_fit_report* out);
IWS_API iws_status iws_select(const iws_sample* s, int reps, iws_rng* rng, unsigned threads,
                              iws_verdict* out);

/* ---- selection study ---- */
typedef struct iws_study_config {
    const double* a_list;
    size_t a_count;
    const double* b_list;
    size_t b_count;
    const int* n_list;
    size_t n_count;
    int reps;
    uint64_t seed;
    int independent_cells; /* 0: every (a, b) cell of an n shares uniforms */
    unsigned threads;
} iws_study_config;

/* Fills the default study grid: a 1,2,3; b 1.1..5.1; n 10,30,50; 1000 reps; seed 1. */
IWS_API void iws_study_config_default(iws_study_config* out);

typedef struct iws_study_cell {
    double a;
    double b;
    int n;
    double p_ad;
    double p_mll;
    double p_both;
    double p_either;
    int reps;
    int fit_failures;
} iws_study_cell;

typedef struct iws_study_average {
    int n;
    double p_ad;
    double p_mll;
    double p_both;
    double p_either;
    int cells;
} iws_study_average;

typedef struct iws_pivotality_row {
    int n;
    const char* index; /* "P-AD" or "P-MLL"; owned by the study */
    double spread;
    double bound;
    int pass;
} iws_pivotality_row;

IWS_API iws_status iws_study_run(const iws_study_config* config, iws_study** out);
IWS_API void iws_study_free(iws_study* st);
IWS_API size_t iws_study_cell_count(const iws_study* st);
IWS_API iws_status iws_study_get_cell(const iws_study* st, size_t i, iws_study_cell* out);
IWS_API size_t iws_study_average_count(const iws_study* st);
IWS_API iws_status iws_study_get_average(const iws_study* st, size_t i, iws_study_average* out);
/* Computed on first use; fails with IWS_ERR_DOMAIN if some n has a single cell. */
IWS_API iws_status iws_study_pivotality_count(iws_study* st, size_t* out);
IWS_API iws_status iws_study_get_pivotality(iws_study* st, size_t i, iws_pivotality_row* out);

/* ---- generative mechanisms ---- */
typedef struct iws_deterioration {
    double k, h, v, d;
} iws_deterioration;

typedef struct iws_stress_strength {
    double u, v, k, h;
} iws_stress_strength;

typedef struct iws_defensive {
    double beta, k, h;
} iws_defensive;

IWS_API iws_status iws_deterioration_iw(const iws_deterioration* c, double* a, double* b);
IWS_API iws_status iws_simulate_deterioration(const iws_deterioration* c, size_t n, iws_rng* rng,
                                              iws_sample** out);
IWS_API iws_status iws_stress_strength_iw(const iws_stress_strength* c, double* a, double* b);
IWS_API iws_status iws_simulate_stress_strength(const iws_stress_strength* c, size_t n, iws_rng* rng,
                                                iws_sample** out);
IWS_API iws_status iws_defensive_iw(const iws_defensive* c, double* a, double* b);
IWS_API iws_status iws_defensive_cdf(const iws_defensive* c, double t, double* out);
IWS_API iws_status iws_defensive_cdf_empirical(const iws_defensive* c, double t, size_t n, iws_rng* rng,
                                               unsigned threads, double* out);

typedef struct iws_series_check {
    double partial_sum;
    double closed_form;
    double gap;
    double tail_bound;
} iws_series_check;

IWS_API iws_status iws_defensive_series_check(const iws_defensive* c, double t, int terms,
                                              iws_series_check* out);

typedef struct iws_max_stability {
    double target_a;
    double target_b;
    double ad_stat;
    double p_value;
    int rejected;
    double median_of_maxima;
    double target_median;
} iws_max_stability;

IWS_API iws_status iws_max_stability_check(double a, double b, int n_max, size_t reps, iws_rng* rng,
                                           iws_max_stability* out);

#ifdef __cplusplus
}
#endif

#endif
