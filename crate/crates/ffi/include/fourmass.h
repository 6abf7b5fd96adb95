/* fourmass C ABI: boost algebra, four-mass states, causal kernels, path actions. */

#ifndef FOURMASS_H
#define FOURMASS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Causal regime of a kernel value.
typedef enum FmRegime {
  FM_REGIME_TIMELIKE = 0,
  FM_REGIME_LIGHTLIKE = 1,
  FM_REGIME_SPACELIKE = 2,
} FmRegime;

// Status codes returned by every FFI call.
typedef enum FmStatus {
  FM_STATUS_OK = 0,
  FM_STATUS_NULL_POINTER = 1,
  FM_STATUS_NON_FINITE = 2,
  FM_STATUS_VELOCITY_OUT_OF_RANGE = 3,
  FM_STATUS_NONPOSITIVE_MASS = 4,
  FM_STATUS_LIGHTLIKE_SINGULARITY = 5,
  FM_STATUS_SPACELIKE_SEGMENT = 6,
  FM_STATUS_TIME_ORDERING = 7,
  FM_STATUS_INVALID_ARGUMENT = 8,
} FmStatus;

// Opaque boosted four-mass state handle.
typedef struct FmState FmState;

// Mass-shell invariants of a boosted state.
typedef struct FmMassShell {
  double p2;
  double v2;
  double pv;
  double m2;
  double mtilde2;
  double m_squared;
} FmMassShell;

// Transition-kernel result.
typedef struct FmKernelValue {
  double re;
  double im;
  enum FmRegime regime;
  double proper_time;
} FmKernelValue;

// Path-action result.
typedef struct FmActionReport {
  double total_proper_time;
  double action;
  double phase_re;
  double phase_im;
} FmActionReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version string of the underlying library (static, do not free).
const char *fm_version(void);

// Create a boosted state from scalar-mass, vector-mass and velocity.
//
// # Safety
// `k` and `beta` must point to 3 readable doubles; `out` must be a valid
// destination for a handle pointer.
enum FmStatus fm_state_new(double m, const double *k, const double *beta, struct FmState **out);

// Release a state handle. Null is a no-op.
//
// # Safety
// `state` must be a pointer returned by `fm_state_new`, not yet freed.
void fm_state_free(struct FmState *state);

// The four-mass vector K = P + V of a state, written as (t, x, y, z).
//
// # Safety
// `state` must be a live handle; `out` must point to 4 writable doubles.
enum FmStatus fm_state_four_mass(const struct FmState *state, double *out);

// Mass-shell invariants P·P, V·V, P·V, m², m̃², M² of a state.
//
// # Safety
// `state` must be a live handle; `out` must be a valid destination.
enum FmStatus fm_state_mass_shell(const struct FmState *state, struct FmMassShell *out);

// Apply the boost Λ(β) to a four-vector (t, x, y, z).
//
// # Safety
// `beta` must point to 3 readable doubles; `vector` to 4 readable doubles;
// `out` to 4 writable doubles.
enum FmStatus fm_boost_apply(const double *beta, const double *vector, double *out);

// Invariant proper time Δτ̄ = Δτ·√(1 − |Δξ/Δτ|²) of one timelike segment.
//
// # Safety
// `dxi` must point to 3 readable doubles; `out` to a writable double.
enum FmStatus fm_proper_time(double dtau, const double *dxi, double *out);

// Closed-form causal transition kernel for signed m, Δτ > 0 and Δξ.
// Lightlike displacements report `FmStatus::LightlikeSingularity`.
//
// # Safety
// `dxi` must point to 3 readable doubles; `out` to a valid destination.
enum FmStatus fm_transition_kernel(double m,
                                   double dtau,
                                   const double *dxi,
                                   struct FmKernelValue *out);

// Action report for a polygonal worldline given as parallel arrays of
// `n` vertex times and `3n` spatial components (x0,y0,z0,x1,y1,z1,...).
//
// # Safety
// `taus` must point to `n` readable doubles and `xis` to `3n`; `out` must
// be a valid destination.
enum FmStatus fm_path_action(double m,
                             uintptr_t n,
                             const double *taus,
                             const double *xis,
                             struct FmActionReport *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FOURMASS_H */
