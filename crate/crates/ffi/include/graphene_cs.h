/*
 * C API for the graphene coherent-state library.
 *
 * Handles returned by gcs_*_new / gcs_*_build are opaque; free them with the
 * matching gcs_*_free. Functions returning GcsStatus write their results
 * through out-pointers only on GCS_STATUS_OK; gcs_last_error_message() gives
 * a thread-local description of the most recent failure.
 */

#ifndef GRAPHENE_CS_H
#define GRAPHENE_CS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Electron (+) or hole (-) spectrum branch.
 */
typedef enum GcsBranch {
  GCS_BRANCH_ELECTRON = 0,
  GCS_BRANCH_HOLE = 1,
} GcsBranch;

/**
 * Coherent-state family (the weight function is the family's standard one).
 */
typedef enum GcsFamily {
  GCS_FAMILY_A = 0,
  GCS_FAMILY_B = 1,
  GCS_FAMILY_C = 2,
} GcsFamily;

/**
 * Status of a C API call.
 */
typedef enum GcsStatus {
  GCS_STATUS_OK = 0,
  /**
   * Arguments rejected before computation.
   */
  GCS_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Computation started but failed numerically.
   */
  GCS_STATUS_NUMERICAL_ERROR = 2,
  /**
   * A required pointer was null.
   */
  GCS_STATUS_NULL_POINTER = 3,
} GcsStatus;

/**
 * Which effective two-band model.
 */
typedef enum GcsSystem {
  GCS_SYSTEM_BILAYER = 0,
  GCS_SYSTEM_MONOLAYER = 1,
} GcsSystem;

/**
 * Opaque coherent-expansion handle.
 */
typedef struct GcsExpansion GcsExpansion;

/**
 * Opaque physical-parameter handle.
 */
typedef struct GcsParams GcsParams;

/**
 * Moments of the dimensionless quadratures.
 */
typedef struct GcsMoments {
  double mean_q;
  double mean_p;
  double mean_q2;
  double mean_p2;
  double sigma_q;
  double sigma_p;
  double product;
} GcsMoments;

/**
 * Quasi-period estimate.
 */
typedef struct GcsPeriod {
  double mean_energy;
  double level_below;
  double level_above;
  double tau;
} GcsPeriod;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. Never null;
 * valid until the next failing call on the same thread.
 */
const char *gcs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gcs_version(void);

/**
 * New parameter handle; returns null (and sets the error message) on invalid
 * scales. `omega` is re-derived from `2 m* omega_c / hbar` with `hbar = 1`,
 * `m* = omega / (2 omega_c)`.
 */
struct GcsParams *gcs_params_new(double omega, double omega_c, double k, double v_fermi);

/**
 * The reference parameter set of the standard figures (`omega = omega_c = k = 1`).
 */
struct GcsParams *gcs_params_default(void);

/**
 * Set the field proxy: `omega_c` tracks `b` and `omega` rescales with the
 * effective mass held fixed.
 *
 * # Safety
 * `params` must be a live handle from `gcs_params_new`/`gcs_params_default`.
 */
enum GcsStatus gcs_params_set_b_field(struct GcsParams *params, double b);

/**
 * # Safety
 * `params` must come from `gcs_params_new`/`gcs_params_default` and not have
 * been freed; null is ignored.
 */
void gcs_params_free(struct GcsParams *params);

/**
 * Landau level `n` of the chosen system and branch; NaN on a null handle.
 *
 * # Safety
 * `params` must be a live handle or null.
 */
double gcs_landau_level(const struct GcsParams *params,
                        enum GcsSystem system,
                        size_t n,
                        enum GcsBranch branch);

/**
 * Build the coherent expansion of `r e^{i theta}` for a family with its
 * standard weight function.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum GcsStatus gcs_expansion_build(enum GcsSystem system,
                                   enum GcsFamily family,
                                   double r,
                                   double theta,
                                   double tol,
                                   struct GcsExpansion **out);

/**
 * # Safety
 * `expansion` must come from `gcs_expansion_build` and not have been freed;
 * null is ignored.
 */
void gcs_expansion_free(struct GcsExpansion *expansion);

/**
 * Number of stored coefficients (truncation order + 1); 0 on null.
 *
 * # Safety
 * `expansion` must be a live handle or null.
 */
size_t gcs_expansion_len(const struct GcsExpansion *expansion);

/**
 * Coefficient `a_n` of the expansion.
 *
 * # Safety
 * `re` and `im` must be writable; `expansion` must be a live handle.
 */
enum GcsStatus gcs_expansion_coefficient(const struct GcsExpansion *expansion,
                                         size_t n,
                                         double *re,
                                         double *im);

/**
 * Occupation `|a_n|^2` (0 beyond the truncation).
 *
 * # Safety
 * `expansion` must be a live handle or null.
 */
double gcs_expansion_weight(const struct GcsExpansion *expansion, size_t n);

/**
 * Bound on the squared weight dropped by truncation; NaN on null.
 *
 * # Safety
 * `expansion` must be a live handle or null.
 */
double gcs_expansion_tail(const struct GcsExpansion *expansion);

/**
 * Quadrature moments and uncertainty product of the expansion.
 *
 * # Safety
 * All handles must be live; `out` must be writable.
 */
enum GcsStatus gcs_moments(const struct GcsExpansion *expansion,
                           const struct GcsParams *params,
                           struct GcsMoments *out);

/**
 * Mean energy of the expansion over the positive-branch spectrum.
 *
 * # Safety
 * All handles must be live; `out` must be writable.
 */
enum GcsStatus gcs_mean_energy(const struct GcsExpansion *expansion,
                               const struct GcsParams *params,
                               double *out);

/**
 * Residual of the annihilation eigenvalue equation for the expansion's own
 * weight function.
 *
 * # Safety
 * All handles must be live; `out` must be writable.
 */
enum GcsStatus gcs_annihilation_residual(const struct GcsExpansion *expansion,
                                         const struct GcsParams *params,
                                         double *out);

/**
 * Quasi-period estimate from the level pair bracketing the mean energy.
 *
 * # Safety
 * All handles must be live; `out` must be writable.
 */
enum GcsStatus gcs_quasi_period(const struct GcsExpansion *expansion,
                                const struct GcsParams *params,
                                struct GcsPeriod *out);

/**
 * Sample the probability density and currents of the evolved expansion at
 * `len` arbitrary positions. Any of `rho`, `jx`, `jy` may be null to skip
 * that output; currents carry their physical `hbar/m*` scale.
 *
 * # Safety
 * `x` must point to `len` readable doubles; non-null outputs to `len`
 * writable doubles; handles must be live.
 */
enum GcsStatus gcs_field_samples(const struct GcsExpansion *expansion,
                                 const struct GcsParams *params,
                                 double t,
                                 const double *x,
                                 size_t len,
                                 double *rho,
                                 double *jx,
                                 double *jy);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GRAPHENE_CS_H */
