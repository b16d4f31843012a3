#ifndef KERNEL_FORGE_H
#define KERNEL_FORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum KfStatus {
  KF_STATUS_OK = 0,
  KF_STATUS_NULL_POINTER = 1,
  KF_STATUS_INVALID_ARGUMENT = 2,
  KF_STATUS_OUT_OF_DOMAIN = 3,
  KF_STATUS_DIMENSION_MISMATCH = 4,
  KF_STATUS_NOT_POSITIVE_DEFINITE = 5,
  KF_STATUS_SINGULAR = 6,
  KF_STATUS_NOT_CONVERGED = 7,
  KF_STATUS_PARSE = 8,
  KF_STATUS_IO = 9,
  KF_STATUS_PANIC = 10,
} KfStatus;

/**
 * Eigenvalue methods for `kf_eigenvalues`.
 */
typedef enum KfEigMethod {
  KF_EIG_METHOD_JACOBI = 0,
  KF_EIG_METHOD_ALT_CHOLESKY = 1,
} KfEigMethod;

/**
 * Built-in processes for `kf_simulate`.
 */
typedef enum KfExample {
  /**
   * Brownian motion on [0, 1]; the grid is real.
   */
  KF_EXAMPLE_BROWNIAN = 1,
  /**
   * Hardy-space process on the disk; the grid is complex.
   */
  KF_EXAMPLE_HARDY = 2,
  /**
   * Cantor-product process on the disk; the grid is complex.
   */
  KF_EXAMPLE_CANTOR = 3,
} KfExample;

/**
 * Sample paths on a grid, one row per path.
 */
typedef struct KfEnsemble KfEnsemble;

/**
 * A kernel family with its parameters.
 */
typedef struct KfKernel KfKernel;

/**
 * A dense complex matrix.
 */
typedef struct KfMatrix KfMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *kf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *kf_version(void);

/**
 * Creates a kernel by family name: `brownian-min`, `brownian-line`,
 * `szego`, `cantor-product`, `shannon`, `drury-arveson`, `overlap`,
 * `green-1d`. `param` is the number of factors for `cantor-product`, the
 * dimension for `drury-arveson` and the partition depth (Lebesgue measure)
 * for `overlap`; it is ignored otherwise. `scale` multiplies the kernel.
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KfStatus kf_kernel_new(const char *family,
                            uint32_t param,
                            double scale,
                            struct KfKernel **out);

/**
 * # Safety
 * `k` must come from `kf_kernel_new` and not be used afterwards.
 */
void kf_kernel_free(struct KfKernel *k);

/**
 * `K(x, y)` for kernels on the real line or the unit interval.
 *
 * # Safety
 * All pointers must be valid.
 */
enum KfStatus kf_kernel_eval_real(const struct KfKernel *k,
                                  double x,
                                  double y,
                                  double *out_re,
                                  double *out_im);

/**
 * `K(z, w)` for kernels on the unit disk.
 *
 * # Safety
 * All pointers must be valid.
 */
enum KfStatus kf_kernel_eval_complex(const struct KfKernel *k,
                                     double z_re,
                                     double z_im,
                                     double w_re,
                                     double w_im,
                                     double *out_re,
                                     double *out_im);

/**
 * Gram matrix on `n` real points.
 *
 * # Safety
 * `xs` must hold `n` values; `out` must be valid.
 */
enum KfStatus kf_gram_real(const struct KfKernel *k,
                           const double *xs,
                           uintptr_t n,
                           struct KfMatrix **out);

/**
 * Gram matrix on `n` points of the complex disk.
 *
 * # Safety
 * `re` and `im` must hold `n` values each; `out` must be valid.
 */
enum KfStatus kf_gram_complex(const struct KfKernel *k,
                              const double *re,
                              const double *im,
                              uintptr_t n,
                              struct KfMatrix **out);

/**
 * Matrix from row-major parts. `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` when non-null) must hold `rows * cols` values.
 */
enum KfStatus kf_matrix_new(uintptr_t rows,
                            uintptr_t cols,
                            const double *re,
                            const double *im,
                            struct KfMatrix **out);

/**
 * # Safety
 * `m` must come from this library and not be used afterwards.
 */
void kf_matrix_free(struct KfMatrix *m);

/**
 * # Safety
 * `m` must be a valid handle or null (giving 0).
 */
uintptr_t kf_matrix_rows(const struct KfMatrix *m);

/**
 * # Safety
 * `m` must be a valid handle or null (giving 0).
 */
uintptr_t kf_matrix_cols(const struct KfMatrix *m);

/**
 * Copies the entries row-major into `re` and `im` (`im` may be null).
 *
 * # Safety
 * The buffers must hold `len` values, with `len` equal to rows × cols.
 */
enum KfStatus kf_matrix_copy(const struct KfMatrix *m, double *re, double *im, uintptr_t len);

/**
 * Sampling factor `B` of a Hermitian positive definite matrix, with
 * `conj(B) Bᵀ = G`; for real input `B` is the lower Cholesky factor.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum KfStatus kf_cholesky(const struct KfMatrix *m, double ridge, struct KfMatrix **out);

/**
 * Inverse of a Hermitian positive definite matrix.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum KfStatus kf_inverse(const struct KfMatrix *m, struct KfMatrix **out);

/**
 * Eigenvalues in descending order into `values` (length n). Returns
 * `NotConverged` when the iteration cap is hit; the values written are the
 * last iterate.
 *
 * # Safety
 * `values` must hold `n` values, where the matrix is n × n.
 */
enum KfStatus kf_eigenvalues(const struct KfMatrix *m,
                             enum KfEigMethod method,
                             double *values,
                             uintptr_t n);

/**
 * `n_paths` draws of the Gaussian vector with covariance `m`.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum KfStatus kf_sample_gaussian(const struct KfMatrix *m,
                                 uintptr_t n_paths,
                                 uint64_t seed,
                                 struct KfEnsemble **out);

/**
 * Paths of a built-in process by discretized stochastic integration at
 * dyadic `resolution`. `grid_im` may be null for the Brownian example.
 * `truncation` is the number of Cantor-product factors.
 *
 * # Safety
 * `grid_re` (and `grid_im` when non-null) must hold `grid_len` values.
 */
enum KfStatus kf_simulate(enum KfExample example,
                          uint32_t truncation,
                          uint32_t resolution,
                          const double *grid_re,
                          const double *grid_im,
                          uintptr_t grid_len,
                          uintptr_t n_paths,
                          uint64_t seed,
                          struct KfEnsemble **out);

/**
 * # Safety
 * `e` must come from this library and not be used afterwards.
 */
void kf_ensemble_free(struct KfEnsemble *e);

/**
 * # Safety
 * `e` must be a valid handle or null (giving 0).
 */
uintptr_t kf_ensemble_paths(const struct KfEnsemble *e);

/**
 * # Safety
 * `e` must be a valid handle or null (giving 0).
 */
uintptr_t kf_ensemble_grid_len(const struct KfEnsemble *e);

/**
 * The paths as a `paths × grid_len` matrix.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum KfStatus kf_ensemble_values(const struct KfEnsemble *e, struct KfMatrix **out);

/**
 * Empirical covariance `(1/P) Σ conj(V_x) V_y` as a grid × grid matrix.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum KfStatus kf_ensemble_covariance(const struct KfEnsemble *e, struct KfMatrix **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KERNEL_FORGE_H */
