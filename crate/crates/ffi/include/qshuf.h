#ifndef QSHUF_H
#define QSHUF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum QshufStatus {
  QSHUF_STATUS_OK = 0,
  QSHUF_STATUS_NULL_POINTER = 1,
  QSHUF_STATUS_INVALID_INPUT = 2,
  QSHUF_STATUS_PARSE = 3,
  QSHUF_STATUS_RESOURCE_LIMIT = 4,
  QSHUF_STATUS_DIVISION_BY_ZERO = 5,
  QSHUF_STATUS_INTERNAL = 6,
  QSHUF_STATUS_UNSOLVABLE = 7,
  QSHUF_STATUS_IO = 8,
  QSHUF_STATUS_INVALID_UTF8 = 9,
  QSHUF_STATUS_PANIC = 10,
} QshufStatus;

/**
 * Opaque handle: a quiver with a specialization of its parameters.
 */
typedef struct QshufAlgebra QshufAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or an empty string.
 * The pointer stays valid until the next qshuf call on the same thread.
 */
const char *qshuf_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void qshuf_string_free(char *s);

/**
 * Creates an algebra for a quiver given as JSON
 * (`{"vertices": 1, "edges": [[0, 0]]}`) with parameters drawn from `seed`.
 *
 * # Safety
 * `quiver_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QshufStatus qshuf_algebra_new(const char *quiver_json,
                                   uint64_t seed,
                                   struct QshufAlgebra **out);

/**
 * Destroys a handle. NULL is ignored.
 *
 * # Safety
 * `alg` must come from [`qshuf_algebra_new`] and must not be used afterwards.
 */
void qshuf_algebra_free(struct QshufAlgebra *alg);

/**
 * Expands the generator word `"i:d,i:d,..."` on side `1` (plus) or `-1`
 * (minus) and writes the element as JSON.
 *
 * # Safety
 * Pointers must be valid; `word` must be NUL-terminated.
 */
enum QshufStatus qshuf_expand_word(const struct QshufAlgebra *alg,
                                   int32_t side,
                                   const char *word,
                                   char **out_json);

/**
 * Pairs a plus element (JSON) with a minus generator word and writes the
 * value as an exact rational string.
 *
 * # Safety
 * Pointers must be valid and strings NUL-terminated.
 */
enum QshufStatus qshuf_pair_word(const struct QshufAlgebra *alg,
                                 const char *element_json,
                                 const char *minus_word,
                                 char **out_value);

/**
 * Dimension of the slope piece `B_{m|n}` over the rationals.
 *
 * # Safety
 * Pointers must be valid and strings NUL-terminated.
 */
enum QshufStatus qshuf_slope_dim(const struct QshufAlgebra *alg,
                                 const char *slope,
                                 const char *dims,
                                 size_t *out);

/**
 * PBW factorization of a plus element (JSON) along `slope + r theta`,
 * written as JSON.
 *
 * # Safety
 * Pointers must be valid and strings NUL-terminated.
 */
enum QshufStatus qshuf_pbw(const struct QshufAlgebra *alg,
                           const char *element_json,
                           const char *slope,
                           const char *theta,
                           char **out_json);

/**
 * Kac polynomial of a quiver (JSON) at the dimension vector `"n_1,n_2,..."`,
 * written as a JSON list of decimal coefficients, constant term first.
 *
 * # Safety
 * Pointers must be valid and strings NUL-terminated.
 */
enum QshufStatus qshuf_kac_polynomial(const char *quiver_json, const char *dims, char **out_json);

/**
 * Runs the dimension comparison for all `n <= upto` with seeds
 * `seed, seed + 1, ..., seed + trials - 1` and writes the report as JSON.
 * `*all_equal` receives 1 when every row matches, 0 otherwise.
 *
 * # Safety
 * Pointers must be valid and strings NUL-terminated.
 */
enum QshufStatus qshuf_check_conjecture(const char *quiver_json,
                                        const char *upto,
                                        uint64_t seed,
                                        uint32_t trials,
                                        int32_t *all_equal,
                                        char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSHUF_H */
