#ifndef BETHE_WEIGHTS_H
#define BETHE_WEIGHTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BwKind {
  BW_KIND_BETHE = 0,
  BW_KIND_PROJECTION = 1,
} BwKind;

typedef enum BwStatus {
  BW_STATUS_OK = 0,
  /**
   * A report was produced and at least one check failed.
   */
  BW_STATUS_CHECK_FAILED = 1,
  BW_STATUS_CONFIG_INVALID = 2,
  BW_STATUS_SAMPLING_EXHAUSTED = 3,
  BW_STATUS_DEGENERATE = 4,
  BW_STATUS_NULL_POINTER = 5,
  BW_STATUS_INVALID_UTF8 = 6,
  BW_STATUS_INTERNAL = 7,
} BwStatus;

/**
 * Result of a verification run.
 */
typedef struct BwReport BwReport;

/**
 * Exact weight-function vector.
 */
typedef struct BwVector BwVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Evaluate one weight-function vector.
 *
 * `pattern` points at `pattern_len` colours and may be null when
 * `pattern_len` is zero. On success `*out` receives a new vector.
 *
 * # Safety
 * `pattern` must be valid for `pattern_len` reads and `out` must be writable.
 */
enum BwStatus bw_compute(enum BwKind kind,
                         uintptr_t n,
                         uintptr_t factors,
                         const uintptr_t *pattern,
                         uintptr_t pattern_len,
                         uint64_t seed,
                         struct BwVector **out);

/**
 * Dimension of the ambient space, or 0 for a null handle.
 *
 * # Safety
 * `v` must be null or a live handle from [`bw_compute`].
 */
uintptr_t bw_vector_dim(const struct BwVector *v);

/**
 * Number of nonzero components, or 0 for a null handle.
 *
 * # Safety
 * `v` must be null or a live handle from [`bw_compute`].
 */
uintptr_t bw_vector_nnz(const struct BwVector *v);

/**
 * The `k`-th nonzero component: its basis index and the decimal numerator
 * and denominator of its coefficient. Both strings are owned by the caller.
 *
 * # Safety
 * `v` must be a live handle; the out-pointers must be writable.
 */
enum BwStatus bw_vector_component(const struct BwVector *v,
                                  uintptr_t k,
                                  uintptr_t *index,
                                  char **numerator,
                                  char **denominator);

/**
 * Serialize the vector as JSON into a new string.
 *
 * # Safety
 * `v` must be a live handle and `out` writable.
 */
enum BwStatus bw_vector_to_json(const struct BwVector *v, char **out);

/**
 * # Safety
 * `v` must be null or a handle from [`bw_compute`] not yet freed.
 */
void bw_vector_free(struct BwVector *v);

/**
 * Run the checks described by a JSON config. Missing fields take their
 * defaults, so `"{}"` runs the default suite.
 *
 * `*out` receives the report whenever one was produced, including when the
 * status is `CheckFailed`.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` writable.
 */
enum BwStatus bw_run_json(const char *config_json, struct BwReport **out);

/**
 * 1 if every record passed, 0 otherwise or for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle from [`bw_run_json`].
 */
int32_t bw_report_passed(const struct BwReport *r);

/**
 * # Safety
 * `r` must be null or a live handle from [`bw_run_json`].
 */
uintptr_t bw_report_num_records(const struct BwReport *r);

/**
 * The machine-readable report as a new string.
 *
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
enum BwStatus bw_report_to_json(const struct BwReport *r, char **out);

/**
 * # Safety
 * `r` must be null or a handle from [`bw_run_json`] not yet freed.
 */
void bw_report_free(struct BwReport *r);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void bw_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *bw_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BETHE_WEIGHTS_H */
