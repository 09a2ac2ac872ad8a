/* ordertau - exact and Monte Carlo Kendall's tau for order-statistic copulas.
 *
 * C API of the shared library. All exact quantities cross this boundary as
 * canonical rational strings ("47/252", "1/3", "2"); they are never rounded.
 * Monte Carlo results are plain structs. Functions return OT_OK on success;
 * on failure they return a status code and leave a message readable through
 * ot_last_error() (thread-local).
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ORDERTAU_H
#define ORDERTAU_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ot_status {
  OT_OK = 0,
  OT_ERR_INVALID_ARGUMENT = 1, /* precondition violated (range, dimension, ...) */
  OT_ERR_PARSE = 2,            /* malformed model spec or rational string */
  OT_ERR_UNSUPPORTED = 3,      /* operation not defined for this model variant */
  OT_ERR_INTERNAL = 4          /* internal consistency failure; always a bug */
} ot_status;

/* Message for the most recent failure on this thread. Owned by the library. */
const char* ot_last_error(void);

/* Frees strings returned through char** out-parameters. */
void ot_string_free(char* s);

const char* ot_version(void);

/* ---- Exact computations for the order transform of independent uniforms ---
 *
 * Subsets K of {1..d} are passed as arrays of strictly increasing 1-based
 * indices with at least two members. Closed forms accept d up to 12; routes
 * that integrate polynomials symbolically accept d up to 8.
 */

/* Kendall's tau of the full order-statistic copula, d >= 2. */
ot_status ot_kappa_product_order(int d, char** kappa_out);

/* Concordance bracket and Kendall's tau of the K-margin of the
 * order-statistic copula, by exact simplex integration. Either out-pointer
 * may be NULL. */
ot_status ot_bracket_margin(int d, const int* members, int count,
                            char** bracket_out, char** kappa_out);

/* Closed forms for K = {1..k}, 2 <= k <= d. Two independent summation
 * formulas are evaluated and must agree; disagreement is OT_ERR_INTERNAL. */
ot_status ot_bracket_lower_tail(int d, int k, char** bracket_out);
ot_status ot_kappa_lower_tail(int d, int k, char** kappa_out);

/* Limit of the lower-tail tau as d grows, k >= 2. */
ot_status ot_kappa_lower_tail_limit(int k, char** kappa_out);

/* kappa = (2^m b - 1) / (2^(m-1) - 1) for a bracket b in [0, 1/2], m >= 2. */
ot_status ot_kappa_from_bracket(const char* bracket, int m, char** kappa_out);

/* Mirrors K through i -> d-i+1. reflected_out must hold `count` ints. */
ot_status ot_reflect_subset(int d, const int* members, int count,
                            int* reflected_out);

/* ---- Copula models ------------------------------------------------------
 *
 * Model specs:
 *   product:D            independent uniforms, D >= 2
 *   frechetM:D | M       comonotone copula (upper Frechet-Hoeffding bound)
 *   frechetW   | W       countermonotone copula, bivariate only
 *   shuffleM:A | shuffleM:B         built-in straight shuffles
 *   shuffleM:a1 a2 b1 b2;...        segments as exact rationals; decimals
 *                                   are rejected for exact operations
 *   mix:w1*M+w2*W        convex mixture of bivariate components (M, W, Pi);
 *                        weights as rationals or finite decimals, sum 1
 */
typedef struct ot_model ot_model;

ot_status ot_model_parse(const char* spec, ot_model** model_out);
void ot_model_free(ot_model* model);
int ot_model_dimension(const ot_model* model);
ot_status ot_model_describe(const ot_model* model, char** out);

/* C(u) at a rational point, exact. coords holds `count` rational strings. */
ot_status ot_eval_copula(const ot_model* model, const char* const* coords,
                         int count, char** value_out);

/* Exact concordance bracket of a shuffle: [C,C] when order_transform == 0,
 * [C_T,C_T] when order_transform != 0. The order-transform identity needs an
 * exchangeable shuffle; asymmetric shuffles are OT_ERR_UNSUPPORTED. */
ot_status ot_shuffle_bracket(const ot_model* model, int order_transform,
                             char** bracket_out);

/* Order transform of a bivariate M/W mixture evaluated at a rational point
 * (the mixture weight of M must be positive). */
ot_status ot_eval_mw_order_transform(const ot_model* model, const char* u1,
                                     const char* u2, char** value_out);

/* ---- Monte Carlo --------------------------------------------------------
 *
 * Estimates are deterministic functions of (model, n, seed, transform,
 * margin): sampling is chunked over fixed-size blocks with per-block
 * substreams derived from (seed, block index), so thread count changes wall
 * time only, never the result.
 */
typedef struct ot_estimate {
  double value;
  double std_error;
  uint64_t n;
  uint64_t seed;
} ot_estimate;

/* Fraction of independent pairs (U, V) with V <= U on the compared
 * coordinates; estimates [C,C], or [C_T,C_T] when order_transform != 0, or
 * the margin bracket when a subset is given. n >= 1000. */
ot_status ot_estimate_bracket(const ot_model* model, uint64_t n, uint64_t seed,
                              int order_transform, const int* margin_members,
                              int margin_count, int threads,
                              ot_estimate* estimate_out);

/* Empirical Kendall distribution function on an increasing grid in [0, 1].
 * Supported models: product, frechetM, frechetW (no transform), M/W mixture.
 * values_out and std_errors_out must hold grid_count doubles. */
ot_status ot_estimate_kendall_curve(const ot_model* model, uint64_t n,
                                    uint64_t seed, int order_transform,
                                    const double* grid, int grid_count,
                                    int threads, double* values_out,
                                    double* std_errors_out);

/* ---- Verification suites ------------------------------------------------ */

typedef struct ot_check {
  char* name;
  int pass;
  char* detail;
} ot_check;

typedef struct ot_report {
  ot_check* checks;
  int count;
  int failed;
} ot_report;

void ot_report_free(ot_report* report);

/* Four combinatorial identities, exact, for all n <= n_max with `trials`
 * random rational parameter pairs per n. */
ot_status ot_verify_identities(int n_max, int trials, uint64_t seed,
                               ot_report* report_out);

/* Simplex integrals of the determinant polynomial family against two closed
 * forms; symbolic route for n <= min(n_max, 8), closed forms to n_max. */
ot_status ot_verify_integrals(int n_max, ot_report* report_out);

/* Margin brackets are invariant under subset reflection, every |K| >= 2,
 * for d = 2..d_max (d_max <= 8). */
ot_status ot_verify_reflection(int d_max, ot_report* report_out);

/* Monotonicity and bound properties of the exact closed forms. */
ot_status ot_verify_monotonicity(int d_max, int k_max, ot_report* report_out);

/* Statistical checks that the order transform does not decrease Kendall's
 * tau, and does not increase the Kendall distribution function pointwise.
 * grid_points intermediate grid values are used when the model supports
 * Kendall curves. value_sigmas gates |estimate - exact| checks, ineq_sigmas
 * the one-sided inequalities. */
ot_status ot_verify_order_theorems(const ot_model* model, uint64_t n,
                                   uint64_t seed, int grid_points,
                                   double value_sigmas, double ineq_sigmas,
                                   int threads, ot_report* report_out);

#ifdef __cplusplus
}
#endif

#endif /* ORDERTAU_H */
