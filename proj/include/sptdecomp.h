/*
 * sptdecomp: decomposition of portfolio log-return relative to the market
 * into a structural process (stock-selection efficacy, midpoint-averaged
 * weights) and a trading process (profit and loss from trading), with
 * functionally generated portfolios, a correlated GBM simulator, and
 * mesh-refinement verification studies.
 *
 * All functions returning sptd_status set a thread-local error message
 * retrievable with sptd_last_error() on failure. Handles are opaque; free
 * them with the matching *_free function. Matrix buffers are row-major with
 * one row per stock: entry (stock i, time k) sits at [i * num_times + k].
 */

#ifndef SPTDECOMP_H
#define SPTDECOMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPTD_API __declspec(dllexport)
#else
#define SPTD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sptd_status {
  SPTD_OK = 0,
  SPTD_ERR_INVALID_ARG = 1, /* null handle or bad buffer passed through the API */
  SPTD_ERR_VALIDATION = 2,  /* input violates a documented precondition */
  SPTD_ERR_ALIGNMENT = 3,   /* paths on different time grids */
  SPTD_ERR_DOMAIN = 4,      /* evaluation outside a function's domain */
  SPTD_ERR_INGEST = 5,      /* malformed csv input; message names the line */
  SPTD_ERR_NUMERIC = 6,     /* numerical failure, e.g. nonpositive value process */
  SPTD_ERR_IO = 7,
  SPTD_ERR_INTERNAL = 8
} sptd_status;

typedef struct sptd_market sptd_market;         /* caps along a time grid */
typedef struct sptd_weights sptd_weights;       /* weight vectors along a grid */
typedef struct sptd_series sptd_series;         /* one value per grid point */
typedef struct sptd_generator sptd_generator;   /* positive C^2 simplex function */
typedef struct sptd_report sptd_report;         /* return decomposition */
typedef struct sptd_refinement sptd_refinement; /* single-path refinement stats */
typedef struct sptd_study sptd_study;           /* multi-seed convergence study */

SPTD_API const char* sptd_version(void);
/* Message for the calling thread's most recent failure; never NULL. */
SPTD_API const char* sptd_last_error(void);
SPTD_API void sptd_string_free(char* s);

/* ---------- discrete stochastic integration (shared grid) ----------
 * len >= 2 values per path; out receives len entries with out[0] = 0.
 * ito: left-endpoint sums; fs: midpoint-averaged integrand;
 * cross variation: sums of products of increments. The three satisfy
 * fs - ito = cross_variation / 2 pointwise. */
SPTD_API sptd_status sptd_ito_integral(const double* y, const double* x, size_t len,
                                       double* out);
SPTD_API sptd_status sptd_fs_integral(const double* y, const double* x, size_t len,
                                      double* out);
SPTD_API sptd_status sptd_cross_variation(const double* x, const double* y, size_t len,
                                          double* out);
/* Sum of absolute increments of a path. */
SPTD_API sptd_status sptd_total_variation(const double* values, size_t len, double* out);

/* ---------- market paths ---------- */

typedef struct sptd_gbm_spec {
  int32_t num_stocks;  /* > 1 */
  int32_t steps;       /* >= 1; uniform grid on [0, horizon] */
  double horizon_years;
  uint64_t seed;       /* same seed, same path, bit for bit */
  const double* drift;        /* num_stocks entries, log drift per year */
  const double* covariance;   /* num_stocks^2 entries, row-major, PSD, per year */
  const double* initial_caps; /* num_stocks entries, > 0 */
} sptd_gbm_spec;

SPTD_API sptd_status sptd_market_simulate_gbm(const sptd_gbm_spec* spec, sptd_market** out);

/* Long-format csv with header "date,ticker,cap"; every ticker present for
 * every date; dates become year fractions (actual/365.25). */
SPTD_API sptd_status sptd_market_from_csv(const char* data, size_t len, sptd_market** out);
SPTD_API sptd_status sptd_market_from_csv_file(const char* path, sptd_market** out);
SPTD_API sptd_status sptd_market_to_csv(const sptd_market* m, char** out);

/* Three-point rank-swap path: strictly descending caps; the stocks at ranks
 * swap_rank and swap_rank+1 meet at their arithmetic mean and finish
 * exchanged, everything else flat. swap = 0 keeps the caps static (the
 * no-trade control case). */
SPTD_API sptd_status sptd_market_leapfrog(const double* caps_descending, int32_t num_stocks,
                                          int32_t swap_rank, int32_t swap,
                                          sptd_market** out);

/* Same path on a coarser grid (every stride-th point). */
SPTD_API sptd_status sptd_market_subsample(const sptd_market* m, int32_t stride,
                                           sptd_market** out);

SPTD_API int32_t sptd_market_num_stocks(const sptd_market* m);
SPTD_API int32_t sptd_market_num_times(const sptd_market* m);
SPTD_API sptd_status sptd_market_times(const sptd_market* m, double* out);
SPTD_API sptd_status sptd_market_caps(const sptd_market* m, double* out);
SPTD_API const char* sptd_market_ticker(const sptd_market* m, int32_t stock);
SPTD_API void sptd_market_free(sptd_market* m);

/* ---------- weight paths ---------- */

SPTD_API sptd_status sptd_market_weights(const sptd_market* m, sptd_weights** out);

/* rule: a generator spec ("market", "geom", "entropy", "diversity:p=0.76",
 * "constweight:w=0.2,0.3,0.5"), "buyhold:shares=...", or "topindex:m=...". */
SPTD_API sptd_status sptd_weights_from_rule(const sptd_market* m, const char* rule,
                                            sptd_weights** out);

/* Explicit weights on the market's grid; each time slice must sum to 1. */
SPTD_API sptd_status sptd_weights_create(const sptd_market* m, const double* weights,
                                         sptd_weights** out);

SPTD_API int32_t sptd_weights_num_stocks(const sptd_weights* w);
SPTD_API int32_t sptd_weights_num_times(const sptd_weights* w);
SPTD_API sptd_status sptd_weights_values(const sptd_weights* w, double* out);
SPTD_API void sptd_weights_free(sptd_weights* w);

/* ---------- generators ---------- */

SPTD_API sptd_status sptd_generator_create(const char* spec, int32_t num_stocks,
                                           sptd_generator** out);
SPTD_API sptd_status sptd_generator_value(const sptd_generator* g, const double* x,
                                          int32_t n, double* out);
SPTD_API sptd_status sptd_generator_log_gradient(const sptd_generator* g, const double* x,
                                                 int32_t n, double* out);
SPTD_API sptd_status sptd_generator_hessian(const sptd_generator* g, const double* x,
                                            int32_t n, double* out /* n*n row-major */);
SPTD_API sptd_status sptd_generated_weights(const sptd_generator* g, const sptd_weights* mu,
                                            sptd_weights** out);
/* Drift process Theta as a series starting at 0. */
SPTD_API sptd_status sptd_drift_process(const sptd_generator* g, const sptd_weights* mu,
                                        sptd_series** out);
SPTD_API void sptd_generator_free(sptd_generator* g);

/* ---------- portfolio machinery ---------- */

/* Self-financing value process rebalanced at left endpoints, Z(0) = 1. */
SPTD_API sptd_status sptd_value_process(const sptd_market* m, const sptd_weights* w,
                                        sptd_series** out);
SPTD_API sptd_status sptd_relative_log_return(const sptd_series* zp, const sptd_series* zm,
                                              sptd_series** out);
/* Cumulative realized excess growth rate of the portfolio. */
SPTD_API sptd_status sptd_excess_growth_cumulative(const sptd_market* m,
                                                   const sptd_weights* w, sptd_series** out);
/* Average-weight log-return of w against the log market weights. */
SPTD_API sptd_status sptd_structural_process(const sptd_weights* w, const sptd_weights* mu,
                                             sptd_series** out);

SPTD_API int32_t sptd_series_length(const sptd_series* s);
SPTD_API sptd_status sptd_series_times(const sptd_series* s, double* out);
SPTD_API sptd_status sptd_series_values(const sptd_series* s, double* out);
SPTD_API void sptd_series_free(sptd_series* s);

/* ---------- return decomposition ---------- */

/* Decomposes the relative log-return of w into structural + trading, exactly.
 * With a generator (may be NULL) also reports its drift process, log-change,
 * and the residuals between the two routes. */
SPTD_API sptd_status sptd_decompose(const sptd_market* m, const sptd_weights* w,
                                    const sptd_generator* g, sptd_report** out);

SPTD_API int32_t sptd_report_num_paths(const sptd_report* r);
SPTD_API const char* sptd_report_path_name(const sptd_report* r, int32_t index);
SPTD_API sptd_status sptd_report_path(const sptd_report* r, const char* name,
                                      sptd_series** out);
SPTD_API int32_t sptd_report_num_diagnostics(const sptd_report* r);
SPTD_API const char* sptd_report_diagnostic_name(const sptd_report* r, int32_t index);
SPTD_API sptd_status sptd_report_diagnostic(const sptd_report* r, const char* name,
                                            double* out);
/* 0 if a generator was supplied and the weights are not the ones it generates. */
SPTD_API int32_t sptd_report_weights_match(const sptd_report* r);

/* JSON: {meta, grid, paths, diagnostics}; meta pairs are caller-supplied.
 * CSV: time,rel,structural,trading[,drift,generator_log_change]. */
SPTD_API sptd_status sptd_report_to_json(const sptd_report* r, const char* const* meta_keys,
                                         const char* const* meta_values, size_t meta_count,
                                         char** out);
SPTD_API sptd_status sptd_report_to_csv(const sptd_report* r, char** out);
SPTD_API void sptd_report_free(sptd_report* r);

/* ---------- verification ---------- */

/* Diagnostics across >= 3 dyadic coarsenings of one path (shared driver):
 * verify_prop1 watches total variations (trading stabilizes, relative return
 * grows); verify_prop2 watches the generated-portfolio residuals r1, r2.
 * Statistics: "r1", "r2", "tv_rel", "tv_trading", "sup_trading",
 * "sup_trading_minus_gamma". Levels are indexed coarse to fine. */
SPTD_API sptd_status sptd_verify_prop1(const sptd_market* finest, const char* rule,
                                       sptd_refinement** out);
SPTD_API sptd_status sptd_verify_prop2(const sptd_market* finest, const char* generator,
                                       sptd_refinement** out);
SPTD_API int32_t sptd_refinement_num_levels(const sptd_refinement* r);
SPTD_API sptd_status sptd_refinement_steps(const sptd_refinement* r, int32_t level,
                                           int32_t* out);
SPTD_API sptd_status sptd_refinement_stat(const sptd_refinement* r, const char* stat,
                                          int32_t level, double* out);
SPTD_API void sptd_refinement_free(sptd_refinement* r);

typedef struct sptd_study_spec {
  sptd_gbm_spec market; /* steps is ignored; the finest refinement is used */
  const int32_t* refinements; /* strictly increasing; each divides the last */
  size_t num_refinements;
  const uint64_t* seeds;
  size_t num_seeds;
  const char* portfolio; /* weight-rule spec */
  int32_t max_threads;   /* 0: one worker per hardware thread */
} sptd_study_spec;

/* Simulates each seed at the finest refinement, subsamples the coarser
 * levels, and aggregates per-level medians across seeds. Deterministic for a
 * fixed spec regardless of thread count. */
SPTD_API sptd_status sptd_study_run(const sptd_study_spec* spec, sptd_study** out);
SPTD_API sptd_status sptd_study_median(const sptd_study* s, const char* stat, int32_t level,
                                       double* out);
SPTD_API sptd_status sptd_study_value(const sptd_study* s, const char* stat,
                                      int32_t seed_index, int32_t level, double* out);
SPTD_API sptd_status sptd_study_to_json(const sptd_study* s, const char* const* meta_keys,
                                        const char* const* meta_values, size_t meta_count,
                                        char** out);
/* Long table: stat,seed,steps,value. */
SPTD_API sptd_status sptd_study_table_csv(const sptd_study* s, char** out);
/* Per-level medians: stat,steps,median,ratio_from_previous. */
SPTD_API sptd_status sptd_study_medians_csv(const sptd_study* s, char** out);
SPTD_API void sptd_study_free(sptd_study* s);

#ifdef __cplusplus
}
#endif

#endif /* SPTDECOMP_H */
