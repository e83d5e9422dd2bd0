#ifndef SPECHT_H
#define SPECHT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum SpechtStatus {
  SPECHT_STATUS_OK = 0,
  SPECHT_STATUS_NULL_POINTER = 1,
  SPECHT_STATUS_INVALID_UTF8 = 2,
  SPECHT_STATUS_PARSE = 3,
  SPECHT_STATUS_INVALID_INPUT = 4,
  SPECHT_STATUS_BUDGET_EXCEEDED = 5,
  SPECHT_STATUS_INTERNAL = 6,
} SpechtStatus;

/**
 * A partition.
 */
typedef struct SpechtPartition SpechtPartition;

/**
 * A classification memo shared across calls. Safe to use from several threads.
 */
typedef struct SpechtStore SpechtStore;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *specht_last_error(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void specht_string_free(char *s);

/**
 * Parses text such as `"3,2^3"` into a new partition.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum SpechtStatus specht_partition_parse(const char *text, struct SpechtPartition **out);

/**
 * Frees a partition. Null is ignored.
 *
 * # Safety
 * `p` must come from this library and not have been freed.
 */
void specht_partition_free(struct SpechtPartition *p);

/**
 * Number of nonzero parts; 0 for null.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t specht_partition_len(const struct SpechtPartition *p);

/**
 * Sum of the parts; 0 for null.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t specht_partition_size(const struct SpechtPartition *p);

/**
 * Copies up to `cap` parts into `buf` and returns the number of parts.
 *
 * # Safety
 * `p` must be null or a live handle; `buf` must hold `cap` elements.
 */
size_t specht_partition_parts(const struct SpechtPartition *p, size_t *buf, size_t cap);

/**
 * Renders a partition in the text grammar accepted by [`specht_partition_parse`].
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum SpechtStatus specht_partition_to_string(const struct SpechtPartition *p, char **out);

/**
 * The conjugate partition.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum SpechtStatus specht_partition_conjugate(const struct SpechtPartition *p,
                                             struct SpechtPartition **out);

/**
 * The 2-regularization.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum SpechtStatus specht_partition_regularize(const struct SpechtPartition *p,
                                              struct SpechtPartition **out);

/**
 * The N-statistic of `mu` inside `lambda`.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum SpechtStatus specht_n_statistic(const struct SpechtPartition *lambda,
                                     const struct SpechtPartition *mu,
                                     int64_t *out);

/**
 * A new empty classification store.
 */
struct SpechtStore *specht_store_new(void);

/**
 * Frees a store. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void specht_store_free(struct SpechtStore *s);

/**
 * Classifies a partition over characteristic `p` (0 or prime) and writes the
 * JSON record to `out_json`.
 *
 * # Safety
 * Handles must be live; `out_json` must be writable.
 */
enum SpechtStatus specht_classify_json(const struct SpechtStore *store,
                                       const struct SpechtPartition *lambda,
                                       uint64_t p,
                                       char **out_json);

/**
 * Builds and checks the explicit homomorphism for `(s, s', f, g)`.
 *
 * A `budget` of 0 uses the default (or the environment override). On
 * success `*verified` is 1 if every check passed and 0 otherwise, and the
 * JSON report is written to `out_json` when it is not null.
 *
 * # Safety
 * `verified` must be writable; `out_json` must be null or writable.
 */
enum SpechtStatus specht_verify_mainhom(size_t s,
                                        size_t s_prime,
                                        size_t f,
                                        size_t g,
                                        uint64_t budget,
                                        int32_t *verified,
                                        char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECHT_H */
