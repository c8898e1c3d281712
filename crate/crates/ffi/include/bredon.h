#ifndef BREDON_H
#define BREDON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define BREDON_METHOD_AUTO 0

#define BREDON_METHOD_CHAIN 1

#define BREDON_METHOD_CLOSED 2

typedef enum BredonStatus {
  BREDON_STATUS_OK = 0,
  BREDON_STATUS_INVALID_MATRIX = 1,
  BREDON_STATUS_INPUT = 2,
  BREDON_STATUS_PRECONDITION = 3,
  BREDON_STATUS_RESOURCE = 4,
  BREDON_STATUS_CONSISTENCY = 5,
  BREDON_STATUS_NULL_POINTER = 6,
  BREDON_STATUS_OUT_OF_RANGE = 7,
  BREDON_STATUS_INTERNAL = 8,
} BredonStatus;

// Opaque result handle.
typedef struct BredonResult BredonResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *bredon_last_error(void);

// Number of spherical subsets (including the empty one).
//
// # Safety
// `entries` holds `rank * rank` row-major entries, 0 meaning infinity;
// `out` must be writable.
enum BredonStatus bredon_spherical_count(uintptr_t rank, const int64_t *entries, uintptr_t *out);

// Computes Bredon homology. `method` is one of the `BREDON_METHOD_*`
// constants; `order_cap` of 0 selects the default cap. On success `*out`
// receives a handle to free with `bredon_result_free`.
//
// # Safety
// `entries` holds `rank * rank` row-major entries, 0 meaning infinity;
// `out` must be writable.
enum BredonStatus bredon_compute(uintptr_t rank,
                                 const int64_t *entries,
                                 uint32_t method,
                                 uint64_t order_cap,
                                 struct BredonResult **out);

// # Safety
// `result` must come from `bredon_compute` and not be freed yet, or be null.
void bredon_result_free(struct BredonResult *result);

// Highest degree with nonzero homology, or -1 if all vanish.
//
// # Safety
// `result` is a live handle and `out` is writable.
enum BredonStatus bredon_result_top_degree(const struct BredonResult *result, int64_t *out);

// Free rank and number of torsion summands of `H_degree`.
//
// # Safety
// `result` is a live handle and both outputs are writable.
enum BredonStatus bredon_result_homology(const struct BredonResult *result,
                                         uintptr_t degree,
                                         uint64_t *free_rank,
                                         uintptr_t *torsion_count);

// The `index`-th invariant factor of the torsion of `H_degree`.
//
// # Safety
// `result` is a live handle and `out` is writable.
enum BredonStatus bredon_result_torsion(const struct BredonResult *result,
                                        uintptr_t degree,
                                        uintptr_t index,
                                        uint64_t *out);

// Whether K-homology is determined (homology vanishes above degree 1),
// and if so `K_0` (`which == 0`) or `K_1` (`which == 1`).
// Returns `BREDON_STATUS_PRECONDITION` when undecided.
//
// # Safety
// `result` is a live handle and both outputs are writable.
enum BredonStatus bredon_result_k_homology(const struct BredonResult *result,
                                           uint32_t which,
                                           uint64_t *free_rank,
                                           uintptr_t *torsion_count);

// Whether every method that ran gave the same groups.
//
// # Safety
// `result` is a live handle and `out` is writable.
enum BredonStatus bredon_result_methods_agree(const struct BredonResult *result, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BREDON_H */
