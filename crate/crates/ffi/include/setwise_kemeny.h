#ifndef SETWISE_KEMENY_H
#define SETWISE_KEMENY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Reduction methods, in the order of the library's `Method::ALL`.
 */
typedef enum SkMethod {
  SK_METHOD_AT3 = 0,
  SK_METHOD_MOT3 = 1,
  SK_METHOD_MOT3E = 2,
  SK_METHOD_ITERATED3_MOT = 3,
  SK_METHOD_MOT = 4,
  SK_METHOD_ITERATED_MOT = 5,
  SK_METHOD_IMPROVED_ITERATED_MOT = 6,
} SkMethod;

typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_POINTER = 1,
  SK_STATUS_INVALID_ARGUMENT = 2,
  SK_STATUS_PARSE = 3,
  SK_STATUS_UNSUPPORTED_FORMAT = 4,
  SK_STATUS_VALIDATION = 5,
  SK_STATUS_CYCLE = 6,
  SK_STATUS_CAP_EXCEEDED = 7,
  SK_STATUS_IO = 8,
  SK_STATUS_INVALID_UTF8 = 9,
  SK_STATUS_OUT_OF_RANGE = 10,
  SK_STATUS_PANIC = 11,
} SkStatus;

typedef struct SkMedianResult SkMedianResult;

typedef struct SkProfile SkProfile;

typedef struct SkReport SkReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Description of the last failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sk_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sk_version(void);

/**
 * Parses PREFLIB `.soc`/`.soi` text.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum SkStatus sk_profile_parse(const char *text, struct SkProfile **out);

/**
 * Reads and parses a PREFLIB file.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum SkStatus sk_profile_load(const char *path, struct SkProfile **out);

/**
 * # Safety
 * `profile` must be null or a handle from `sk_profile_parse`/`sk_profile_load`
 * that has not been freed.
 */
void sk_profile_free(struct SkProfile *profile);

/**
 * # Safety
 * `profile` must be a live handle; `n` a valid pointer.
 */
enum SkStatus sk_profile_num_alternatives(const struct SkProfile *profile, size_t *n);

/**
 * # Safety
 * `profile` must be a live handle; `m` a valid pointer.
 */
enum SkStatus sk_profile_num_voters(const struct SkProfile *profile, uint64_t *m);

/**
 * Label of alternative `index`; the string is owned by the profile.
 *
 * # Safety
 * `profile` must be a live handle; `label` a valid pointer.
 */
enum SkStatus sk_profile_label(const struct SkProfile *profile, size_t index, const char **label);

/**
 * `n_xy - n_yx` over the profile.
 *
 * # Safety
 * `profile` must be a live handle; `delta` a valid pointer.
 */
enum SkStatus sk_profile_delta(const struct SkProfile *profile, size_t x, size_t y, int64_t *delta);

/**
 * k-wise distance (`k` is 2 or 3) between two rankings of `0..n`.
 *
 * # Safety
 * `a` and `b` must point to `n` readable indices; `distance` a valid pointer.
 */
enum SkStatus sk_ranking_distance(const size_t *a,
                                  const size_t *b,
                                  size_t n,
                                  uint32_t k,
                                  uint64_t *distance);

/**
 * Total k-wise distance from a ranking to every vote of the profile.
 *
 * # Safety
 * `profile` must be a live handle, `order` must point to `n` readable
 * indices and `distance` must be valid.
 */
enum SkStatus sk_profile_distance(const struct SkProfile *profile,
                                  const size_t *order,
                                  size_t n,
                                  uint32_t k,
                                  uint64_t *distance);

/**
 * Runs one reduction method. `max_iterations` of 0 means no limit.
 *
 * # Safety
 * `profile` must be a live handle and `out` a valid pointer.
 */
enum SkStatus sk_reduce(const struct SkProfile *profile,
                        enum SkMethod method,
                        size_t max_iterations,
                        struct SkReport **out);

/**
 * # Safety
 * `report` must be null or a live handle from `sk_reduce`.
 */
void sk_report_free(struct SkReport *report);

/**
 * 1 when the orders hold in every median, 0 when only in some median.
 *
 * # Safety
 * `report` must be a live handle; `every_median` a valid pointer.
 */
enum SkStatus sk_report_every_median(const struct SkReport *report, uint8_t *every_median);

/**
 * # Safety
 * `report` must be a live handle; `iterations` a valid pointer.
 */
enum SkStatus sk_report_iterations(const struct SkReport *report, size_t *iterations);

/**
 * Solved fraction as `numer / denom` in lowest terms.
 *
 * # Safety
 * `report` must be a live handle; `numer` and `denom` valid pointers.
 */
enum SkStatus sk_report_solved_fraction(const struct SkReport *report,
                                        uint64_t *numer,
                                        uint64_t *denom);

/**
 * Number of ordered pairs the method certified directly.
 *
 * # Safety
 * `report` must be a live handle; `count` a valid pointer.
 */
enum SkStatus sk_report_certified_count(const struct SkReport *report, size_t *count);

/**
 * The `index`-th certified pair: `first` precedes `second`.
 *
 * # Safety
 * `report` must be a live handle; `first` and `second` valid pointers.
 */
enum SkStatus sk_report_certified_pair(const struct SkReport *report,
                                       size_t index,
                                       size_t *first,
                                       size_t *second);

/**
 * Number of ordered pairs in the transitive closure (`EVERY_MEDIAN` methods;
 * always 0 otherwise).
 *
 * # Safety
 * `report` must be a live handle; `count` a valid pointer.
 */
enum SkStatus sk_report_constraint_count(const struct SkReport *report, size_t *count);

/**
 * # Safety
 * `report` must be a live handle; `first` and `second` valid pointers.
 */
enum SkStatus sk_report_constraint_pair(const struct SkReport *report,
                                        size_t index,
                                        size_t *first,
                                        size_t *second);

/**
 * Every k-wise median. With `use_reduction` non-zero the search is limited
 * to rankings respecting the iterated test of the rule. `cap` of 0 keeps the
 * default size limit.
 *
 * # Safety
 * `profile` must be a live handle and `out` a valid pointer.
 */
enum SkStatus sk_solve(const struct SkProfile *profile,
                       uint32_t k,
                       uint8_t use_reduction,
                       size_t cap,
                       struct SkMedianResult **out);

/**
 * # Safety
 * `result` must be null or a live handle from `sk_solve`.
 */
void sk_median_free(struct SkMedianResult *result);

/**
 * # Safety
 * `result` must be a live handle; the out pointers must be valid.
 */
enum SkStatus sk_median_summary(const struct SkMedianResult *result,
                                uint64_t *optimal_value,
                                size_t *median_count,
                                uint64_t *nodes_explored);

/**
 * Copies median `index` (best first) into `order`, which holds `n` slots.
 *
 * # Safety
 * `result` must be a live handle and `order` must point to `n` writable slots.
 */
enum SkStatus sk_median_ranking(const struct SkMedianResult *result,
                                size_t index,
                                size_t *order,
                                size_t n);

/**
 * Lower bound on the search-space reduction when a fraction `p` in `[0, 1)`
 * of the pair orders is fixed among `n` alternatives.
 *
 * # Safety
 * `bound` must be a valid pointer.
 */
enum SkStatus sk_reduction_rate_bound(size_t n, double p, double *bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SETWISE_KEMENY_H */
