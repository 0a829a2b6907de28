// Copyright 2026 The krselect Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// C interface to krselect. Objects are opaque handles released with the
// matching *_free function. Every call returns a kr_status; on failure the
// message is available from kr_last_error() on the calling thread.

#ifndef KRSELECT_KRSELECT_H_
#define KRSELECT_KRSELECT_H_

#include <stddef.h>

#if defined(KRSELECT_BUILDING_LIBRARY)
#define KR_API __attribute__((visibility("default")))
#else
#define KR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kr_status {
  KR_OK = 0,
  KR_ZERO_MASS = 1,
  KR_SUPPORT_MISMATCH,
  KR_MASS_MISMATCH,
  KR_INVALID_TARGET_INDEX,
  KR_EMPTY_SAMPLE,
  KR_DIMENSION_MISMATCH,
  KR_DUPLICATE_POINT,
  KR_INVALID_METRIC,
  KR_EMPTY_SUBSET,
  KR_INDEX_OUT_OF_RANGE,
  KR_NON_FINITE_COST,
  KR_DEGENERATE,
  KR_DEGENERATE_MARGIN,
  KR_EMPTY_CATEGORY,
  KR_CONSTANT_SCORES,
  KR_ZERO_VARIANCE,
  KR_DEGENERATE_ALPHA,
  KR_NEGATIVE_EPS,
  KR_RANGE_VIOLATION,
  KR_INVALID_RHO,
  KR_W_EXCEEDS_MASS,
  KR_NOT_LIPSCHITZ,
  KR_SINGLE_CLASS,
  KR_ZERO_DIAMETER,
  KR_TOO_LARGE,
  KR_MALFORMED_LINE,
  KR_INCONSISTENT_WIDTH,
  KR_NEGATIVE_PROBABILITY,
  KR_MALFORMED_HEADER,
  KR_BAD_LABEL,
  KR_ALL_MISSING,
  KR_INVALID_ARGUMENT,
  KR_IO_ERROR,
  KR_NUMERIC_FAILURE,
  KR_INTERNAL = 100
} kr_status;

typedef struct kr_measure kr_measure;
typedef struct kr_metric kr_metric;
typedef struct kr_sample kr_sample;

KR_API const char* kr_version(void);
KR_API const char* kr_status_name(kr_status status);
// Nonzero when the status blames the caller's input rather than the numerics.
KR_API int kr_status_is_input_error(kr_status status);
// Message of the last failure on this thread; "" after a success.
KR_API const char* kr_last_error(void);

// Measures: CSV with header weight,c1,...,cr, or n points of `dim`
// coordinates given row-major.
KR_API kr_status kr_measure_load_csv(const char* path, kr_measure** out);
KR_API kr_status kr_measure_parse_csv(const char* text, kr_measure** out);
KR_API kr_status kr_measure_create(const double* coords, const double* weights, size_t n,
                                   size_t dim, kr_measure** out);
KR_API size_t kr_measure_size(const kr_measure* m);
KR_API double kr_measure_mass(const kr_measure* m);
KR_API void kr_measure_free(kr_measure* m);

// Metrics: JSON {"coords": [...], "combine": "l1" | "linf"}.
KR_API kr_status kr_metric_load_json(const char* path, kr_metric** out);
KR_API kr_status kr_metric_parse_json(const char* text, kr_metric** out);
// l1 product of r identical genotype coordinates: k-discrete, or the line
// when line_scores is nonzero.
KR_API kr_status kr_metric_genotype(size_t r, int line_scores, double k, kr_metric** out);
KR_API size_t kr_metric_dimension(const kr_metric* d);
KR_API void kr_metric_free(kr_metric* d);

typedef enum kr_w1_method {
  KR_W1_AUTO = 0,
  KR_W1_TV,
  KR_W1_LINE,
  KR_W1_CIRCLE,
  KR_W1_LP,
  KR_W1_PRODUCT
} kr_w1_method;

typedef struct kr_certificate {
  int optimal;
  double max_violation;
  double marginal_violation;
  double lipschitz_violation;
  double slackness_violation;
  double duality_gap;
} kr_certificate;

KR_API kr_status kr_w1(const kr_measure* m1, const kr_measure* m2, const kr_metric* d,
                       kr_w1_method method, double* out);
// Exact solve plus an optimality certificate for the returned plan and
// potential. `cert` may be NULL.
KR_API kr_status kr_w1_certified(const kr_measure* m1, const kr_measure* m2,
                                 const kr_metric* d, double* w1, kr_certificate* cert);

typedef struct kr_trend_result {
  double pearson;
  double pearson_two_sum;
  double catt;
  double catt_slope;
  double t_fit;
  double generalized_t_ca;
  double generalized_t_chi2;
  double bound_lower;
  double bound_stat;
  double bound_upper;
  double w1_discrete;
  int dropped_empty;
} kr_trend_result;

// Trend statistics of one case/control table with m categories and the
// given scores; k is the discrete distance used for w1_discrete.
KR_API kr_status kr_trend(const double* cases, const double* controls, const double* scores,
                          size_t m, double k, kr_trend_result* out);

// Reads a table file (one "r0 r1 r2 s0 s1 s2" line per SNP). On success
// *rows holds 6 * *count doubles, to be released with kr_free_doubles.
KR_API kr_status kr_trend_load_tables(const char* path, double** rows, size_t* count);
KR_API void kr_free_doubles(double* p);

// Labeled samples: CSV with header label,c1,...,cr, or genotype calls with
// one phenotype per individual (individuals missing any call are dropped).
KR_API kr_status kr_sample_load_csv(const char* path, kr_sample** out);
KR_API kr_status kr_sample_load_gen(const char* gen_path, const char* phenotype_path,
                                    double threshold, kr_sample** out);
KR_API size_t kr_sample_size(const kr_sample* s);
KR_API size_t kr_sample_dimension(const kr_sample* s);
KR_API double kr_sample_call_rate(const kr_sample* s);
KR_API void kr_sample_free(kr_sample* s);

typedef struct kr_complexity_result {
  double w;
  double delta;
  double ratio;
  double risk_bound;
  int risk_clamped;
  size_t num_positive;
  size_t num_negative;
} kr_complexity_result;

KR_API kr_status kr_complexity(const kr_sample* s, const kr_metric* d, double rho,
                               kr_complexity_result* out);

typedef enum kr_strategy {
  KR_STRATEGY_BB = 0,
  KR_STRATEGY_FORWARD,
  KR_STRATEGY_BACKWARD,
  KR_STRATEGY_EXHAUSTIVE
} kr_strategy;

#define KR_MAX_FEATURES 64

typedef struct kr_selection_result {
  size_t subset[KR_MAX_FEATURES];  // 0-based, ascending
  size_t subset_size;
  double j_value;
  size_t nodes_evaluated;
  size_t nodes_pruned;
} kr_selection_result;

// Picks k coordinates maximizing W1 between the class measures. A nonzero
// product_additive sums per-coordinate distances instead of solving jointly.
KR_API kr_status kr_select(const kr_sample* s, const kr_metric* d, size_t k,
                           kr_strategy strategy, int product_additive, int threads,
                           kr_selection_result* out);

typedef enum kr_verify_family {
  KR_VERIFY_LINE = 0,
  KR_VERIFY_DISCRETE,
  KR_VERIFY_CIRCLE,
  KR_VERIFY_PRODUCT
} kr_verify_family;

typedef struct kr_verify_stats {
  size_t checked;
  size_t failed;
  double max_error;  // |closed - exact| / max(1, exact)
} kr_verify_stats;

// Compares a closed form against the exact solver on random instances.
KR_API kr_status kr_verify(kr_verify_family family, unsigned long long seed, size_t instances,
                           double tol, kr_verify_stats* out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // KRSELECT_KRSELECT_H_
