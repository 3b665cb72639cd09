#ifndef BH_LAB_H
#define BH_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum BhStatus {
  BH_STATUS_OK = 0,
  BH_STATUS_NULL_POINTER = 1,
  BH_STATUS_INVALID_ARGUMENT = 2,
  BH_STATUS_PARSE_ERROR = 3,
  BH_STATUS_NOT_HOMOGENEOUS = 4,
  BH_STATUS_COST_CAP = 5,
  BH_STATUS_INTERNAL = 6,
} BhStatus;

typedef enum BhCoefficientKind {
  BH_COEFFICIENT_KIND_STEINHAUS = 0,
  BH_COEFFICIENT_KIND_RADEMACHER = 1,
  BH_COEFFICIENT_KIND_COMPLEX_GAUSSIAN = 2,
} BhCoefficientKind;

typedef enum BhVerdict {
  BH_VERDICT_VERIFIED = 0,
  BH_VERDICT_SATISFIED_NOT_CERTIFIED = 1,
  BH_VERDICT_VIOLATED_ESTIMATES = 2,
  BH_VERDICT_DEGENERATE = 3,
  BH_VERDICT_INCONCLUSIVE = 4,
} BhVerdict;

/**
 * Opaque polynomial handle.
 */
typedef struct BhPolynomial BhPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the
 * library; valid until the next call on the same thread.
 */
const char *bh_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bh_version(void);

/**
 * Parses a polynomial JSON document (fields `N`, optional `m`, `terms`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BhStatus bh_poly_from_json(const char *json, struct BhPolynomial **out);

/**
 * Random `m`-homogeneous polynomial in `n` variables with full support.
 *
 * # Safety
 * `out` must be writable.
 */
enum BhStatus bh_poly_random(enum BhCoefficientKind kind,
                             size_t n,
                             uint32_t m,
                             uint64_t seed,
                             struct BhPolynomial **out);

/**
 * Releases a handle; NULL is ignored.
 *
 * # Safety
 * `p` must come from this library and not be used afterwards.
 */
void bh_poly_free(struct BhPolynomial *p);

/**
 * Serializes to JSON; release the result with [`bh_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum BhStatus bh_poly_to_json(const struct BhPolynomial *p, char **out);

/**
 * Releases a string returned by this library; NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void bh_string_free(char *s);

/**
 * Number of variables.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum BhStatus bh_poly_dimension(const struct BhPolynomial *p, size_t *out);

/**
 * `P(z)` for `z_r = re[r] + i·im[r]`, `len` equal to the dimension.
 *
 * # Safety
 * `re` and `im` must point to `len` doubles; outputs must be writable.
 */
enum BhStatus bh_poly_evaluate(const struct BhPolynomial *p,
                               const double *re,
                               const double *im,
                               size_t len,
                               double *out_re,
                               double *out_im);

/**
 * Weighted coefficient norm `(Σ (|c_α|/√(α+1))^{2m/(m+1)})^{(m+1)/2m}`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum BhStatus bh_weighted_coeff_norm(const struct BhPolynomial *p, double *out);

/**
 * Lower bound on `sup_{D^N} |P|` by multistart phase search.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum BhStatus bh_sup_norm_lower(const struct BhPolynomial *p,
                                size_t restarts,
                                uint64_t seed,
                                double *out);

/**
 * Certified upper bound on `sup_{D^N} |P|` within relative `slack` of the
 * grid maximum; fails with `CostCap` past `cost_cap` evaluations.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum BhStatus bh_sup_norm_upper(const struct BhPolynomial *p,
                                double slack,
                                uint64_t cost_cap,
                                double *out);

/**
 * `m^{(m−1)/2m} (1 − 1/(m−1))^{m−1}`; `degenerate` (nullable) is set for `m = 2`.
 *
 * # Safety
 * `out` must be writable; `degenerate` may be NULL.
 */
enum BhStatus bh_paper_constant(uint32_t m, double *out, bool *degenerate);

/**
 * Checks the weighted inequality for `p` with default effort and `seed`.
 * `report_json` (nullable) receives the full report; free it with
 * [`bh_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `verdict` must be writable.
 */
enum BhStatus bh_verify_main_theorem(const struct BhPolynomial *p,
                                     uint64_t seed,
                                     enum BhVerdict *verdict,
                                     char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BH_LAB_H */
