#ifndef SPECFLUCT_H
#define SPECFLUCT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_ARGUMENT = 2,
  SF_STATUS_PARSE = 3,
  SF_STATUS_CAPACITY = 4,
  SF_STATUS_OVERFLOW = 5,
  SF_STATUS_BUFFER_TOO_SMALL = 6,
  SF_STATUS_PANIC = 7,
} SfStatus;

typedef enum SfSector {
  SF_SECTOR_Q = 0,
  SF_SECTOR_E = 1,
  SF_SECTOR_QPERP = 2,
  SF_SECTOR_MIXED = 3,
} SfSector;

/**
 * Opaque distribution handle.
 */
typedef struct SfDistribution SfDistribution;

/**
 * Opaque polynomial handle.
 */
typedef struct SfPolynomial SfPolynomial;

typedef struct SfPrediction {
  enum SfSector sector;
  double alpha;
  double critical_alpha;
  double rate_exponent;
  double sigma_sq;
  bool supercritical;
} SfPrediction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *sf_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *sf_version(void);

void sf_string_free(char *s);

/**
 * Polynomial with coefficients `a_0, ..., a_{len-1}`.
 */
enum SfStatus sf_polynomial_new(const double *coeffs, size_t len, struct SfPolynomial **out);

/**
 * Polynomial from a coefficient list such as `"0,-6,0,1"`.
 */
enum SfStatus sf_polynomial_parse(const char *spec, struct SfPolynomial **out);

void sf_polynomial_free(struct SfPolynomial *p);

/**
 * Value of the polynomial at `x`.
 */
enum SfStatus sf_polynomial_evaluate(const struct SfPolynomial *p, double x, double *out);

/**
 * Distribution from `"rademacher:C"`, `"uniform:C"` or `"atoms:v@p,..."`.
 */
enum SfStatus sf_distribution_parse(const char *spec, struct SfDistribution **out);

enum SfStatus sf_distribution_atoms(const double *values,
                                    const double *probabilities,
                                    size_t len,
                                    struct SfDistribution **out);

void sf_distribution_free(struct SfDistribution *d);

/**
 * Raw moments `E[X^1], ..., E[X^6]` into `out[0..6]`.
 */
enum SfStatus sf_distribution_moments(const struct SfDistribution *d, double *out);

/**
 * `p^k(beta)` for `beta = sum_i mults[i] delta^{levels[i]}`.
 *
 * Fails with `SF_STATUS_OVERFLOW` if the count does not fit in 64 bits.
 */
enum SfStatus sf_path_count(size_t k,
                            const int64_t *levels,
                            const uint32_t *mults,
                            size_t len,
                            uint64_t *out);

/**
 * Splits `p` into `Q`, `Q^perp` and even parts, each written as `m + 1`
 * coefficients. `*len` receives `m + 1`; with `capacity < m + 1` nothing
 * else is written and `SF_STATUS_BUFFER_TOO_SMALL` is returned.
 */
enum SfStatus sf_decompose(const struct SfPolynomial *p,
                           double *q_part,
                           double *qperp_part,
                           double *even_part,
                           size_t capacity,
                           size_t *len);

enum SfStatus sf_predict(const struct SfPolynomial *p,
                         double alpha,
                         const struct SfDistribution *dist,
                         struct SfPrediction *out);

/**
 * `Tr P(H)` for the diagonal `potential[0..n]`.
 */
enum SfStatus sf_trace_poly(const struct SfPolynomial *p,
                            const double *potential,
                            size_t n,
                            double *out);

/**
 * `E[Tr P(H)]` at size `n` and decay exponent `alpha`.
 */
enum SfStatus sf_exact_expected_trace(const struct SfPolynomial *p,
                                      double alpha,
                                      uint64_t n,
                                      const struct SfDistribution *dist,
                                      double *out);

/**
 * Runs the experiment described by a JSON config and returns the CSV
 * table in `*csv_out`, to be released with `sf_string_free`.
 */
enum SfStatus sf_run_experiment_csv(const char *config_json, char **csv_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECFLUCT_H */
