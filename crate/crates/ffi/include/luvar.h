#ifndef LUVAR_H
#define LUVAR_H

/* Generated by cbindgen from luvar-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Unblocked no-pivot variant selector.
 */
typedef enum {
  LUVAR_NOPIV_VARIANT_NOPIV1 = 1,
  LUVAR_NOPIV_VARIANT_NOPIV2 = 2,
  LUVAR_NOPIV_VARIANT_NOPIV3 = 3,
  LUVAR_NOPIV_VARIANT_NOPIV4 = 4,
  LUVAR_NOPIV_VARIANT_NOPIV5 = 5,
} LuvarNopivVariant;

/**
 * Pivoted variant selector; pair with a block size (`0` = unblocked).
 */
typedef enum {
  LUVAR_PIV_VARIANT_PIV3A = 0,
  LUVAR_PIV_VARIANT_PIV3B = 1,
  LUVAR_PIV_VARIANT_PIV4 = 2,
  LUVAR_PIV_VARIANT_PIV5 = 3,
} LuvarPivVariant;

/**
 * Status code returned by every API call.
 */
typedef enum {
  LUVAR_STATUS_OK = 0,
  /**
   * Operand dimensions are incompatible.
   */
  LUVAR_STATUS_SHAPE_ERROR = 1,
  /**
   * An index, split point, or pivot offset is out of range.
   */
  LUVAR_STATUS_BOUNDS_ERROR = 2,
  /**
   * An argument is outside the operation's domain.
   */
  LUVAR_STATUS_DOMAIN_ERROR = 3,
  /**
   * Zero pivot or zero triangular diagonal; see the step out-parameter.
   */
  LUVAR_STATUS_SINGULAR_ERROR = 4,
  /**
   * Pivot column exactly zero; the input columns are linearly dependent.
   */
  LUVAR_STATUS_RANK_DEFICIENT_ERROR = 5,
  LUVAR_STATUS_PARSE_ERROR = 6,
  LUVAR_STATUS_IO_ERROR = 7,
  /**
   * A required pointer argument was null.
   */
  LUVAR_STATUS_NULL_POINTER = 8,
  /**
   * A variant or parameter value outside the documented range.
   */
  LUVAR_STATUS_INVALID_ARGUMENT = 9,
} LuvarStatus;

/**
 * Opaque dense matrix handle (column-major f64 storage).
 */
typedef struct LuvarMatrix LuvarMatrix;

/**
 * Opaque packed factorization handle (L\U plus pivot vector).
 */
typedef struct LuvarPackedLu LuvarPackedLu;

/**
 * Backward-error measurements for a completed factorization.
 */
typedef struct {
  double componentwise_c;
  double normwise_residual;
  double growth_factor;
  double epsilon;
} LuvarBackwardError;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Human-readable description of a status code (static storage).
 */
const char *luvar_status_message(LuvarStatus status);

/**
 * Allocates a zero matrix.
 *
 * # Safety
 * `out` must be a valid pointer; the handle must be released with
 * `luvar_matrix_free`.
 */
LuvarStatus luvar_matrix_zeros(uintptr_t rows, uintptr_t cols, LuvarMatrix **out);

/**
 * Allocates an identity matrix.
 *
 * # Safety
 * As `luvar_matrix_zeros`.
 */
LuvarStatus luvar_matrix_identity(uintptr_t n, LuvarMatrix **out);

/**
 * Allocates a matrix from `rows * cols` column-major values.
 *
 * # Safety
 * `data` must point to at least `rows * cols` doubles.
 */
LuvarStatus luvar_matrix_from_data(uintptr_t rows,
                                   uintptr_t cols,
                                   const double *data,
                                   LuvarMatrix **out);

/**
 * # Safety
 * `m` must be a live handle from this library.
 */
LuvarStatus luvar_matrix_clone(const LuvarMatrix *m, LuvarMatrix **out);

/**
 * Releases a matrix handle; null is ignored.
 *
 * # Safety
 * `m` must be null or a handle obtained from this library, not yet freed.
 */
void luvar_matrix_free(LuvarMatrix *m);

/**
 * Row count; 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uintptr_t luvar_matrix_rows(const LuvarMatrix *m);

/**
 * Column count; 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uintptr_t luvar_matrix_cols(const LuvarMatrix *m);

/**
 * Reads element `(i, j)`.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
LuvarStatus luvar_matrix_get(const LuvarMatrix *m, uintptr_t i, uintptr_t j, double *out);

/**
 * Writes element `(i, j)`.
 *
 * # Safety
 * `m` must be a live handle.
 */
LuvarStatus luvar_matrix_set(LuvarMatrix *m, uintptr_t i, uintptr_t j, double value);

/**
 * Reads a matrix from the text format (`rows cols` header then row lines).
 *
 * # Safety
 * `path` must be a NUL-terminated UTF-8 string; `out` a valid pointer.
 */
LuvarStatus luvar_matrix_read_file(const char *path, LuvarMatrix **out);

/**
 * Writes a matrix in the text format.
 *
 * # Safety
 * `m` must be a live handle; `path` a NUL-terminated UTF-8 string.
 */
LuvarStatus luvar_matrix_write_file(const LuvarMatrix *m, const char *path);

/**
 * Seeded uniform [-1, 1] matrix; equal seeds give identical contents.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
LuvarStatus luvar_gen_random(uint64_t seed, uintptr_t rows, uintptr_t cols, LuvarMatrix **out);

/**
 * The element-growth matrix (unit diagonal, -1 below, ones column last).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
LuvarStatus luvar_gen_growth(uintptr_t rows, uintptr_t cols, LuvarMatrix **out);

/**
 * Random matrix whose leading `k x k` block is exactly singular.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
LuvarStatus luvar_gen_singular_minor(uint64_t seed,
                                     uintptr_t rows,
                                     uintptr_t cols,
                                     uintptr_t k,
                                     LuvarMatrix **out);

/**
 * Random matrix whose column `k` depends exactly on earlier columns.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
LuvarStatus luvar_gen_rankdef(uint64_t seed,
                              uintptr_t rows,
                              uintptr_t cols,
                              uintptr_t k,
                              LuvarMatrix **out);

/**
 * Factors a square matrix in place without pivoting (`L\U` packed).
 *
 * On `SingularError`, `out_step` (nullable) receives the failing step.
 *
 * # Safety
 * `m` must be a live handle; `out_step` null or valid.
 */
LuvarStatus luvar_lu_nopiv(LuvarMatrix *m, LuvarNopivVariant variant, uintptr_t *out_step);

/**
 * Factors a copy of `a` with partial pivoting; `nb = 0` selects the
 * unblocked algorithm, `nb >= 1` the blocked one with that panel width.
 *
 * On `RankDeficientError`, `out_step` (nullable) receives the failing
 * column.
 *
 * # Safety
 * `a` must be a live handle; `out` valid; `out_step` null or valid. The
 * returned handle must be released with `luvar_packed_free`.
 */
LuvarStatus luvar_lu_piv(const LuvarMatrix *a,
                         LuvarPivVariant variant,
                         uintptr_t nb,
                         LuvarPackedLu **out,
                         uintptr_t *out_step);

/**
 * Releases a packed factorization handle; null is ignored.
 *
 * # Safety
 * `lu` must be null or a handle obtained from this library, not yet freed.
 */
void luvar_packed_free(LuvarPackedLu *lu);

/**
 * # Safety
 * `lu` must be null or a live handle.
 */
uintptr_t luvar_packed_rows(const LuvarPackedLu *lu);

/**
 * # Safety
 * `lu` must be null or a live handle.
 */
uintptr_t luvar_packed_cols(const LuvarPackedLu *lu);

/**
 * Reads packed factor element `(i, j)` (strict lower = multipliers, upper =
 * U, unit diagonal of L implicit).
 *
 * # Safety
 * `lu` must be a live handle and `out` a valid pointer.
 */
LuvarStatus luvar_packed_factor_get(const LuvarPackedLu *lu, uintptr_t i, uintptr_t j, double *out);

/**
 * Reads relative pivot offset `i` (row `i` was swapped with `i + offset`).
 *
 * # Safety
 * `lu` must be a live handle and `out` a valid pointer.
 */
LuvarStatus luvar_packed_pivot_get(const LuvarPackedLu *lu, uintptr_t i, uintptr_t *out);

/**
 * Reads a packed factorization file (matrix, `---`, pivot vector).
 *
 * # Safety
 * `path` must be a NUL-terminated UTF-8 string; `out` a valid pointer.
 */
LuvarStatus luvar_packed_read_file(const char *path, LuvarPackedLu **out);

/**
 * Writes a packed factorization file.
 *
 * # Safety
 * `lu` must be a live handle; `path` a NUL-terminated UTF-8 string.
 */
LuvarStatus luvar_packed_write_file(const LuvarPackedLu *lu, const char *path);

/**
 * Solves `A x = b` from a square packed factorization.
 *
 * # Safety
 * `b` and `x` must each point to `n` doubles, where `n` is the
 * factorization size.
 */
LuvarStatus luvar_solve(const LuvarPackedLu *lu, const double *b, uintptr_t n, double *x);

/**
 * Checks the factorization postcondition against the original matrix.
 *
 * `tol <= 0` selects the default `50 * n * eps * maxabs` tolerance. Each
 * out-pointer is nullable.
 *
 * # Safety
 * `lu` and `a_hat` must be live handles; out-pointers null or valid.
 */
LuvarStatus luvar_check_postcondition(const LuvarPackedLu *lu,
                                      const LuvarMatrix *a_hat,
                                      double tol,
                                      double *out_residual,
                                      double *out_max_multiplier,
                                      bool *out_passed);

/**
 * Componentwise backward-error measurement.
 *
 * # Safety
 * `lu` and `a_hat` must be live handles; `out` a valid pointer.
 */
LuvarStatus luvar_backward_error(const LuvarPackedLu *lu,
                                 const LuvarMatrix *a_hat,
                                 LuvarBackwardError *out);

/**
 * Element growth of a no-pivot run over the input's largest magnitude.
 *
 * # Safety
 * `a` must be a live handle; `out` a valid pointer.
 */
LuvarStatus luvar_growth_nopiv(const LuvarMatrix *a, LuvarNopivVariant variant, double *out);

/**
 * Element growth of a pivoted run (`nb = 0` unblocked).
 *
 * # Safety
 * `a` must be a live handle; `out` a valid pointer.
 */
LuvarStatus luvar_growth_piv(const LuvarMatrix *a,
                             LuvarPivVariant variant,
                             uintptr_t nb,
                             double *out);

/**
 * Applies the packed pivots to a vector of length `target_rows`, forward
 * (`inverse = false`) or undoing them (`inverse = true`).
 *
 * # Safety
 * `lu` must be a live handle; `data` must point to `len` doubles.
 */
LuvarStatus luvar_packed_apply_pivots(const LuvarPackedLu *lu,
                                      double *data,
                                      uintptr_t len,
                                      bool inverse);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LUVAR_H */
