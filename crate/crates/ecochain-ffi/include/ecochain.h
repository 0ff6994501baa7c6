#ifndef ECOCHAIN_H
#define ECOCHAIN_H

/* Generated by cbindgen from the ecochain-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * How an equilibrium entry is to be read.
 */
typedef enum EcoEquilibriumKind {
  /**
   * `state`, `feasible` and `residual` are meaningful.
   */
  EcoEquilibriumKind_Present = 0,
  /**
   * The point recedes to infinity in the Malthus limit.
   */
  EcoEquilibriumKind_AbsentInMalthus = 1,
  /**
   * The defining system is numerically singular.
   */
  EcoEquilibriumKind_Degenerate = 2,
} EcoEquilibriumKind;

/**
 * Stability classification of an equilibrium.
 */
typedef enum EcoStabilityVerdict {
  EcoStabilityVerdict_Stable = 0,
  EcoStabilityVerdict_Unstable = 1,
  EcoStabilityVerdict_Nonhyperbolic = 2,
} EcoStabilityVerdict;

/**
 * Result code of every fallible call.
 */
typedef enum EcoStatus {
  EcoStatus_Ok = 0,
  EcoStatus_NullPointer = 1,
  EcoStatus_InvalidArgument = 2,
  EcoStatus_InvalidParams = 3,
  EcoStatus_NumericalFailure = 4,
} EcoStatus;

/**
 * Model variant selector.
 */
typedef enum EcoVariant {
  EcoVariant_MalthusEpidemic = 0,
  EcoVariant_LogisticEpidemic = 1,
  EcoVariant_LogisticDiseaseFree = 2,
  EcoVariant_MalthusDiseaseFree = 3,
} EcoVariant;

/**
 * Opaque equilibrium listing.
 */
typedef struct EcoEquilibria EcoEquilibria;

/**
 * Opaque parameter-set handle.
 */
typedef struct EcoParams EcoParams;

/**
 * Opaque trajectory handle.
 */
typedef struct EcoTrajectory EcoTrajectory;

/**
 * One equilibrium as seen through the ABI.
 */
typedef struct EcoEquilibrium {
  enum EcoEquilibriumKind kind;
  /**
   * NUL-terminated label, e.g. "E1t" or "Dstar".
   */
  char label[16];
  /**
   * Components (P, S, I, V).
   */
  double state[4];
  bool feasible;
  /**
   * Euclidean norm of the vector field at `state`.
   */
  double residual;
} EcoEquilibrium;

/**
 * Eigenvalue data attached to a classification.
 */
typedef struct EcoStability {
  enum EcoStabilityVerdict verdict;
  /**
   * Number of valid entries in the eigenvalue arrays (3 or 4).
   */
  uint32_t n_eigenvalues;
  double eigenvalues_re[4];
  double eigenvalues_im[4];
  /**
   * Eigenvalues with real part above the hyperbolicity threshold.
   */
  uint32_t n_unstable;
  /**
   * Eigenvalues with |real part| within the threshold.
   */
  uint32_t n_center;
} EcoStability;

/**
 * Adaptive integrator settings; pass `ecochain_default_config()` for the
 * library defaults.
 */
typedef struct EcoIntegratorConfig {
  double rtol;
  double atol;
  double h0;
  double hmax;
  double tmax;
} EcoIntegratorConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *ecochain_last_error(void);

/**
 * Allocate a parameter set. Free with `ecochain_params_free`.
 *
 * No validation happens here; call `ecochain_params_validate`.
 */
struct EcoParams *ecochain_params_new(double g,
                                      double f,
                                      double c,
                                      double l,
                                      double q,
                                      double b,
                                      double beta,
                                      double tau,
                                      double nu,
                                      double mu,
                                      double r,
                                      double k);

/**
 * # Safety
 * `params` must come from `ecochain_params_new` and not be freed twice.
 */
void ecochain_params_free(struct EcoParams *params);

/**
 * Check the parameter constraints for a variant. On `InvalidParams` the
 * violated constraints are listed in `ecochain_last_error()`.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum EcoStatus ecochain_params_validate(const struct EcoParams *params, enum EcoVariant variant);

/**
 * Evaluate the right-hand side at `x` (length 4) into `out` (length 4).
 *
 * # Safety
 * `params`, `x` and `out` must be valid; `x` and `out` must point to 4
 * doubles each.
 */
enum EcoStatus ecochain_vector_field(enum EcoVariant variant,
                                     const struct EcoParams *params,
                                     const double *x,
                                     double *out);

/**
 * Analytic Jacobian at `x`, written row-major into `out` (room for 16
 * doubles). `*dim` receives 4, or 3 for disease-free variants.
 *
 * # Safety
 * As for `ecochain_vector_field`; `out` must hold 16 doubles.
 */
enum EcoStatus ecochain_jacobian(enum EcoVariant variant,
                                 const struct EcoParams *params,
                                 const double *x,
                                 double *out,
                                 uint32_t *dim);

/**
 * Total population `P + S + I + V` of a state vector (length 4).
 *
 * # Safety
 * `x` must point to 4 doubles.
 */
double ecochain_total_population(const double *x);

/**
 * The transcritical thresholds `rho1 = lK/mu` and
 * `rho2 = (fr/(b tau))(1 - mu/(lK))`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum EcoStatus ecochain_thresholds(const struct EcoParams *params, double *rho1, double *rho2);

/**
 * Compute all equilibria of a variant. Returns null (with a message) for
 * invalid parameters. Free with `ecochain_equilibria_free`.
 *
 * # Safety
 * `params` must be a live handle.
 */
struct EcoEquilibria *ecochain_equilibria_compute(enum EcoVariant variant,
                                                  const struct EcoParams *params);

/**
 * Number of entries in an equilibrium listing.
 *
 * # Safety
 * `handle` must be a live handle.
 */
size_t ecochain_equilibria_count(const struct EcoEquilibria *handle);

/**
 * Fetch one entry of an equilibrium listing.
 *
 * # Safety
 * `handle` must be live and `out` valid.
 */
enum EcoStatus ecochain_equilibria_get(const struct EcoEquilibria *handle,
                                       size_t index,
                                       struct EcoEquilibrium *out);

/**
 * Classify the `index`-th equilibrium of a listing by its Jacobian
 * spectrum. Fails with `InvalidArgument` for absent or degenerate entries.
 *
 * # Safety
 * `handle` must be live and `out` valid.
 */
enum EcoStatus ecochain_equilibria_classify(const struct EcoEquilibria *handle,
                                            size_t index,
                                            struct EcoStability *out);

/**
 * # Safety
 * `handle` must come from `ecochain_equilibria_compute`.
 */
void ecochain_equilibria_free(struct EcoEquilibria *handle);

/**
 * Library default integrator settings (tmax = 100).
 */
struct EcoIntegratorConfig ecochain_default_config(void);

/**
 * Integrate from `x0` (length 4). Returns null (with a message) on invalid
 * input. Free with `ecochain_trajectory_free`.
 *
 * # Safety
 * `params` must be live; `x0` must point to 4 doubles.
 */
struct EcoTrajectory *ecochain_integrate(enum EcoVariant variant,
                                         const struct EcoParams *params,
                                         const double *x0,
                                         struct EcoIntegratorConfig config);

/**
 * Number of stored (time, state) samples.
 *
 * # Safety
 * `handle` must be a live handle.
 */
size_t ecochain_trajectory_len(const struct EcoTrajectory *handle);

/**
 * Fetch sample `index` into `t` and `state` (length 4).
 *
 * # Safety
 * All pointers must be valid; `state` must hold 4 doubles.
 */
enum EcoStatus ecochain_trajectory_get(const struct EcoTrajectory *handle,
                                       size_t index,
                                       double *t,
                                       double *state);

/**
 * Accepted/rejected step counts, and whether `tmax` was reached
 * (`completed = false` means the step size underflowed).
 *
 * # Safety
 * All pointers must be valid.
 */
enum EcoStatus ecochain_trajectory_stats(const struct EcoTrajectory *handle,
                                         uint64_t *accepted,
                                         uint64_t *rejected,
                                         bool *completed);

/**
 * # Safety
 * `handle` must come from `ecochain_integrate`.
 */
void ecochain_trajectory_free(struct EcoTrajectory *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ECOCHAIN_H */
