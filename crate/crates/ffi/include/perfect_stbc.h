#ifndef PERFECT_STBC_H
#define PERFECT_STBC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum PstbcStatus {
  PSTBC_STATUS_OK = 0,
  PSTBC_STATUS_NULL_POINTER = 1,
  PSTBC_STATUS_INVALID_ARGUMENT = 2,
  PSTBC_STATUS_UNKNOWN_NAME = 3,
  PSTBC_STATUS_CONSTRUCTION_FAILED = 4,
  PSTBC_STATUS_BUFFER_TOO_SMALL = 5,
  PSTBC_STATUS_BUDGET_EXCEEDED = 6,
  PSTBC_STATUS_PANIC = 7,
} PstbcStatus;

/**
 * Opaque code handle.
 */
typedef struct PstbcCode PstbcCode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pstbc_last_error(void);

/**
 * Build a code by name (golden, 2x2:<p>, 3x3, 4x4, 6x6, 2x2:17-broken).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PstbcStatus pstbc_code_new(const char *name, struct PstbcCode **out);

/**
 * Release a handle; null is ignored.
 *
 * # Safety
 * `code` must come from `pstbc_code_new` and not be used afterwards.
 */
void pstbc_code_free(struct PstbcCode *code);

/**
 * Number of antennas n; codewords are n×n and carry n² symbols.
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
enum PstbcStatus pstbc_code_degree(const struct PstbcCode *code, size_t *out);

/**
 * Unitary generator matrix R (n×n, row-major).
 *
 * # Safety
 * `re` and `im` must each hold `len` doubles.
 */
enum PstbcStatus pstbc_code_generator_matrix(const struct PstbcCode *code,
                                             double *re,
                                             double *im,
                                             size_t len);

/**
 * Encode n² complex symbols into an n×n codeword (row-major).
 *
 * # Safety
 * Symbol arrays hold `n_symbols` doubles, output arrays `out_len`.
 */
enum PstbcStatus pstbc_code_encode(const struct PstbcCode *code,
                                   const double *sym_re,
                                   const double *sym_im,
                                   size_t n_symbols,
                                   double *out_re,
                                   double *out_im,
                                   size_t out_len);

/**
 * Minimum normalized |det|² over nonzero symbol vectors in the box of
 * the given radius. Exhaustive when the box is small enough, otherwise
 * weight ≤ 2 vectors plus `random_vectors` random ones.
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
enum PstbcStatus pstbc_code_min_det(const struct PstbcCode *code,
                                    int64_t radius,
                                    uint64_t random_vectors,
                                    uint64_t seed,
                                    double *out);

/**
 * Text description of the code; free the string with `pstbc_string_free`.
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
enum PstbcStatus pstbc_code_to_text(const struct PstbcCode *code, char **out);

/**
 * Release a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pstbc_string_free(char *s);

/**
 * Simulate one Eb/N0 point; reports codewords sent and codeword errors.
 *
 * # Safety
 * `constellation` must be a NUL-terminated string; outputs valid pointers.
 */
enum PstbcStatus pstbc_simulate_point(const struct PstbcCode *code,
                                      const char *constellation,
                                      double ebn0_db,
                                      uint64_t seed,
                                      uint64_t max_codewords,
                                      uint64_t target_errors,
                                      uint64_t *sent,
                                      uint64_t *errors);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERFECT_STBC_H */
