#ifndef CWVO_H
#define CWVO_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CwvoStatus {
  CWVO_STATUS_OK = 0,
  CWVO_STATUS_NULL_POINTER = 1,
  CWVO_STATUS_INVALID_ARGUMENT = 2,
  CWVO_STATUS_SINGULAR_SYSTEM = 3,
  CWVO_STATUS_DOMAIN = 4,
  CWVO_STATUS_BUFFER_TOO_SMALL = 5,
  CWVO_STATUS_INTERNAL = 6,
  CWVO_STATUS_PANIC = 7,
} CwvoStatus;

/**
 * Which operational matrix [`cwvo_operational_matrix`] should build.
 */
typedef enum CwvoMatrixKind {
  CWVO_MATRIX_KIND_DERIVATIVE = 0,
  CWVO_MATRIX_KIND_CHANGE_OF_BASIS = 1,
  CWVO_MATRIX_KIND_MONOMIAL_ORDER = 2,
  CWVO_MATRIX_KIND_WAVELET_ORDER = 3,
} CwvoMatrixKind;

/**
 * Opaque solution handle.
 */
typedef struct CwvoSolution CwvoSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *cwvo_status_message(enum CwvoStatus status);

/**
 * Message of the last failure on this thread. Valid until the next failing call.
 */
const char *cwvo_last_error(void);

/**
 * Gamma function for `x > 0`.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum CwvoStatus cwvo_gamma(double x, double *out);

/**
 * Solves built-in example `example` (1..4) on the `(k, m)` basis.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer. On success the
 * handle must be released with [`cwvo_solution_free`].
 */
enum CwvoStatus cwvo_solve_example(uint32_t example,
                                   uint32_t k,
                                   size_t m,
                                   struct CwvoSolution **out);

/**
 * Releases a solution handle. Null is ignored.
 *
 * # Safety
 * `sol` must be null or a handle from [`cwvo_solve_example`] not yet freed.
 */
void cwvo_solution_free(struct CwvoSolution *sol);

/**
 * Evaluates `u(x, t)` on the unit square.
 *
 * # Safety
 * `sol` must be a live handle; `out` must be valid for writing one `double`.
 */
enum CwvoStatus cwvo_solution_eval(const struct CwvoSolution *sol, double x, double t, double *out);

/**
 * Basis size `2^k M`; the coefficient matrix is size x size.
 *
 * # Safety
 * `sol` must be a live handle; `out` must be valid for writing one `size_t`.
 */
enum CwvoStatus cwvo_solution_size(const struct CwvoSolution *sol, size_t *out);

/**
 * Copies the coefficient matrix, row-major, into `buf` of `len` doubles.
 *
 * # Safety
 * `sol` must be a live handle; `buf` must be valid for writing `len` doubles.
 */
enum CwvoStatus cwvo_solution_coefficients(const struct CwvoSolution *sol, double *buf, size_t len);

/**
 * Condition estimate of the collocation matrix and the interior residual.
 *
 * # Safety
 * `sol` must be a live handle; the out-pointers must be valid for writing.
 */
enum CwvoStatus cwvo_solution_diagnostics(const struct CwvoSolution *sol,
                                          double *condition_estimate,
                                          double *max_interior_residual);

/**
 * Builds an operational matrix for the `(k, m)` basis and constant order
 * `vartheta` at time `t` (the order and time are ignored for `D` and `P`).
 * Writes the dimension to `dim` and the row-major entries to `buf`; call
 * with a null `buf` to query the dimension only.
 *
 * # Safety
 * `dim` must be valid for writing; `buf` must be null or valid for writing `len` doubles.
 */
enum CwvoStatus cwvo_operational_matrix(enum CwvoMatrixKind kind,
                                        uint32_t k,
                                        size_t m,
                                        double vartheta,
                                        double t,
                                        double *buf,
                                        size_t len,
                                        size_t *dim);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CWVO_H */
