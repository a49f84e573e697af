/* C interface to the qso dynamics toolkit.  Generated by cbindgen; do not edit. */

#ifndef QSO_H
#define QSO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every library call.
 */
typedef enum QsoStatus {
  /**
   * Success: output buffers hold the result.
   */
  QSO_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  QSO_STATUS_NULL_POINTER = 1,
  /**
   * A dimension was unusable (fewer than two loci, or a malformed state
   * length).
   */
  QSO_STATUS_BAD_DIMENSION = 2,
  /**
   * The state is not a point of the simplex (negative coordinate or sum
   * away from one).
   */
  QSO_STATUS_NOT_A_SIMPLEX_POINT = 3,
  /**
   * Two arguments disagree about the number of loci.
   */
  QSO_STATUS_DIMENSION_MISMATCH = 4,
  /**
   * A coefficient lies outside `[0, 1]` or is not finite.
   */
  QSO_STATUS_COEFFICIENT_OUT_OF_RANGE = 5,
  /**
   * Every locus has zero mass; no fiber exists.
   */
  QSO_STATUS_ALL_LOCI_ZERO = 6,
  /**
   * A locus exchanges nothing with the others, so the closed-form limit
   * is not determined by the spectral route.
   */
  QSO_STATUS_FROZEN_LOCI = 7,
  /**
   * Eigenvalue one of the fiber matrix is not simple; no unique
   * projection exists.
   */
  QSO_STATUS_NON_SIMPLE_EIGENVALUE_ONE = 8,
  /**
   * The eigensolver did not produce a usable decomposition.
   */
  QSO_STATUS_EIGENSOLVER_FAILURE = 9,
  /**
   * The left eigenvector could not be normalized against the fiber.
   */
  QSO_STATUS_DEGENERATE_NORMALIZATION = 10,
  /**
   * A scenario was malformed (unused by this surface, reserved).
   */
  QSO_STATUS_INVALID_SCENARIO = 11,
  /**
   * An internal panic was caught at the boundary.
   */
  QSO_STATUS_PANIC = 12,
} QsoStatus;

/**
 * An opaque model handle: the validated coefficient matrix.
 */
typedef struct QsoModel QsoModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a model from an `m x m` row-major coefficient matrix.
 *
 * Entries must be finite and lie in `[0, 1]`; the diagonal is stored but
 * never read by the dynamics.  At least two loci are required.  On success
 * `*out_model` owns the handle; release it with `qso_model_free`.
 *
 * # Safety
 * `coefficients` must point to `m * m` readable doubles and `out_model` to
 * a writable pointer slot.
 */
enum QsoStatus qso_model_new(size_t m, const double *coefficients, struct QsoModel **out_model);

/**
 * Release a model created by `qso_model_new`.  A null handle is a no-op.
 *
 * # Safety
 * `model` must be null or a handle from `qso_model_new` that has not been
 * freed already.
 */
void qso_model_free(struct QsoModel *model);

/**
 * Number of loci of the model; zero when the handle is null.
 *
 * # Safety
 * `model` must be null or a live handle from `qso_model_new`.
 */
size_t qso_model_loci(const struct QsoModel *model);

/**
 * Apply one generation of the dynamics to `state` (length `2m`), writing
 * the next state to `out_state` (length `2m`; may alias `state`).
 *
 * # Safety
 * `model` must be a live handle; `state` must point to `2m` readable and
 * `out_state` to `2m` writable doubles.
 */
enum QsoStatus qso_apply(const struct QsoModel *model, const double *state, double *out_state);

/**
 * Per-locus interaction imbalance at `state`: `out_ld` (length `m`)
 * receives the increments the next generation would add to the odd
 * coordinates.  All entries are zero exactly at the fixed points.
 *
 * # Safety
 * `model` must be a live handle; `state` must point to `2m` readable and
 * `out_ld` to `m` writable doubles.
 */
enum QsoStatus qso_linkage_disequilibrium(const struct QsoModel *model,
                                          const double *state,
                                          double *out_ld);

/**
 * Iterate the dynamics from `state` until the one-step change drops below
 * `tol` in sup norm or `max_iters` generations have run.  `out_state`
 * (length `2m`) receives the final state; `out_iterations` and
 * `out_converged` are optional and may be null.
 *
 * # Safety
 * `model` must be a live handle; `state` must point to `2m` readable and
 * `out_state` to `2m` writable doubles; `out_iterations` and
 * `out_converged` must each be null or writable.
 */
enum QsoStatus qso_simulate(const struct QsoModel *model,
                            const double *state,
                            uint64_t max_iters,
                            double tol,
                            double *out_state,
                            uint64_t *out_iterations,
                            bool *out_converged);

/**
 * Compute the exact trajectory limit from `state` in closed form.
 * `out_limit` (length `2m`) receives the limit; `out_beta` and `out_gap`
 * are optional and receive the conserved projection coefficient and the
 * spectral gap.  Returns `QSO_STATUS_FROZEN_LOCI` or
 * `QSO_STATUS_NON_SIMPLE_EIGENVALUE_ONE` when no closed form exists.
 *
 * # Safety
 * `model` must be a live handle; `state` must point to `2m` readable and
 * `out_limit` to `2m` writable doubles; `out_beta` and `out_gap` must each
 * be null or writable.
 */
enum QsoStatus qso_predict_limit(const struct QsoModel *model,
                                 const double *state,
                                 double *out_limit,
                                 double *out_beta,
                                 double *out_gap);

/**
 * Eigenvalues of the fiber matrix at `state`, sorted by descending
 * modulus.  `out_re` and `out_im` (length `m` each) receive the real and
 * imaginary parts.  The fiber is taken as-is: zero-mass loci keep their
 * rows.
 *
 * # Safety
 * `model` must be a live handle; `state` must point to `2m` readable
 * doubles; `out_re` and `out_im` must each point to `m` writable doubles.
 */
enum QsoStatus qso_spectrum(const struct QsoModel *model,
                            const double *state,
                            double *out_re,
                            double *out_im);

/**
 * Test whether `state` is a fixed point of the dynamics, within `tol` on
 * the per-locus increments.  Writes the verdict to `out_fixed`.
 *
 * # Safety
 * `model` must be a live handle; `state` must point to `2m` readable
 * doubles; `out_fixed` must be writable.
 */
enum QsoStatus qso_is_fixed_point(const struct QsoModel *model,
                                  const double *state,
                                  double tol,
                                  bool *out_fixed);

/**
 * Human-readable, static name of a status code.
 */
const char *qso_status_name(enum QsoStatus status);

/**
 * Library version as a static C string.
 */
const char *qso_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSO_H */
