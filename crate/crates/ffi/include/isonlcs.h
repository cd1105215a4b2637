/* C interface to the isonlcs library. */

#ifndef ISONLCS_H
#define ISONLCS_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum {
  ISONLCS_STATUS_OK = 0,
  ISONLCS_STATUS_NULL_POINTER = 1,
  ISONLCS_STATUS_INVALID_ARGUMENT = 2,
  ISONLCS_STATUS_TRUNCATION_INADEQUATE = 3,
  ISONLCS_STATUS_DEGENERATE_WITNESS = 4,
  ISONLCS_STATUS_UNSUPPORTED_STATE = 5,
  ISONLCS_STATUS_UNDEFINED_WITNESS = 6,
  ISONLCS_STATUS_NON_FINITE = 7,
  ISONLCS_STATUS_INTERNAL_ERROR = 8,
} IsonlcsStatus;

// Selector for `isonlcs_algebra_residual`.
typedef enum {
  ISONLCS_ALGEBRA_IDENTITY_QUAD = 0,
  ISONLCS_ALGEBRA_IDENTITY_CASIMIR_LEFT = 1,
  ISONLCS_ALGEBRA_IDENTITY_CASIMIR_RIGHT = 2,
  ISONLCS_ALGEBRA_IDENTITY_HEIS_I = 3,
  ISONLCS_ALGEBRA_IDENTITY_HEIS_II = 4,
  ISONLCS_ALGEBRA_IDENTITY_HEIS_III = 5,
  ISONLCS_ALGEBRA_IDENTITY_NUM_III = 6,
} IsonlcsAlgebraIdentity;

// Opaque truncated-basis handle.
typedef struct IsonlcsBasis IsonlcsBasis;

// Opaque state handle.
typedef struct IsonlcsState IsonlcsState;

// Opaque handle for the precomputed witness operator products.
typedef struct IsonlcsWitnessOps IsonlcsWitnessOps;

// Squeezing witnesses of one state (see the core crate for definitions).
typedef struct {
  double r;
  double theta;
  double i1;
  double i2;
  double i3;
  double i4;
  double var_x;
  double var_p;
  double var_big_x;
  double var_big_p;
} IsonlcsSqueezeReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create a truncated shifted basis with highest shifted index `n_max`
// (`n_max >= 8`). Returns null on invalid input.
IsonlcsBasis *isonlcs_basis_new(uintptr_t n_max);

// Release a basis handle. Null is a no-op.
//
// # Safety
// `basis` must come from `isonlcs_basis_new` and not have been freed.
void isonlcs_basis_free(IsonlcsBasis *basis);

// Matrix dimension (`n_max + 1`) of the basis.
//
// # Safety
// `basis` must be a live handle from `isonlcs_basis_new`.
uintptr_t isonlcs_basis_dim(const IsonlcsBasis *basis);

// Build the nonlinear coherent state `alpha = re + i im` on the basis.
//
// # Safety
// `basis` must be a live handle; `out_state` must be a valid pointer.
IsonlcsStatus isonlcs_state_nlcs(const IsonlcsBasis *basis,
                                 double re,
                                 double im,
                                 IsonlcsState **out_state);

// Build the canonical coherent state `zeta = re + i im` on the basis.
//
// # Safety
// `basis` must be a live handle; `out_state` must be a valid pointer.
IsonlcsStatus isonlcs_state_canonical(const IsonlcsBasis *basis,
                                      double re,
                                      double im,
                                      IsonlcsState **out_state);

// Build the shifted Fock level `|ñ>` on the basis.
//
// # Safety
// `basis` must be a live handle; `out_state` must be a valid pointer.
IsonlcsStatus isonlcs_state_fock(const IsonlcsBasis *basis,
                                 uintptr_t shifted_level,
                                 IsonlcsState **out_state);

// Release a state handle. Null is a no-op.
//
// # Safety
// `state` must come from one of the state constructors and not have been
// freed.
void isonlcs_state_free(IsonlcsState *state);

// Number of amplitudes the state carries (the basis dimension).
//
// # Safety
// `state` must be a live state handle.
uintptr_t isonlcs_state_len(const IsonlcsState *state);

// Copy the complex amplitudes into caller-owned arrays of length `len`.
//
// # Safety
// `out_re`/`out_im` must point to writable arrays of at least `len`
// doubles; `state` must be a live handle.
IsonlcsStatus isonlcs_state_amplitudes(const IsonlcsState *state,
                                       double *out_re,
                                       double *out_im,
                                       uintptr_t len);

// Copy the occupation probabilities into a caller-owned array of length
// `len`.
//
// # Safety
// `out` must point to a writable array of at least `len` doubles; `state`
// must be a live handle.
IsonlcsStatus isonlcs_state_probabilities(const IsonlcsState *state, double *out, uintptr_t len);

// Precompute the witness operator products for a basis (reusable across
// states and sweeps). Returns null on failure.
//
// # Safety
// `basis` must be a live handle.
IsonlcsWitnessOps *isonlcs_witness_ops_new(const IsonlcsBasis *basis);

// Release a witness-operator handle. Null is a no-op.
//
// # Safety
// `ops` must come from `isonlcs_witness_ops_new` and not have been freed.
void isonlcs_witness_ops_free(IsonlcsWitnessOps *ops);

// A3, Mandel Q, g2(0) and mean occupation of a state.
//
// # Safety
// All handles must be live and built on the same basis; out-pointers must
// be valid.
IsonlcsStatus isonlcs_stats(const IsonlcsState *state,
                            const IsonlcsWitnessOps *ops,
                            double *out_a3,
                            double *out_q,
                            double *out_g2,
                            double *out_mean_k0);

// Quadrature and amplitude-squared squeezing witnesses of a state.
//
// # Safety
// All handles must be live and built on the same basis; `out` must be
// valid.
IsonlcsStatus isonlcs_squeeze(const IsonlcsState *state,
                              const IsonlcsWitnessOps *ops,
                              IsonlcsSqueezeReport *out);

// s-parameterized quasi-probability `F(x + i p, s)` of a state (`s = 0`
// Wigner, `s = -1` Husimi; `s < 1` required).
//
// # Safety
// `state` must be a live handle; `out` must be valid.
IsonlcsStatus isonlcs_s_function(const IsonlcsState *state,
                                 double x,
                                 double p,
                                 double s,
                                 double *out);

// Quadrature distribution `P(x, phi)` of a state at one point.
//
// # Safety
// `state` must be a live handle; `out` must be valid.
IsonlcsStatus isonlcs_quadrature_distribution(const IsonlcsState *state,
                                              double x,
                                              double phi,
                                              double *out);

// Number of singular P-function coefficients of a nonlinear coherent state
// (order + 1). Returns 0 for unsupported states.
//
// # Safety
// `state` must be a live handle.
uintptr_t isonlcs_pfunction_len(const IsonlcsState *state);

// Copy the signed singular P-function coefficients into a caller-owned
// array of length `len` (see `isonlcs_pfunction_len`).
//
// # Safety
// `out` must point to a writable array of at least `len` doubles; `state`
// must be a live handle.
IsonlcsStatus isonlcs_pfunction_coefficients(const IsonlcsState *state, double *out, uintptr_t len);

// Max-absolute-entry residual of one ladder-algebra identity on the
// interior columns of the basis.
//
// # Safety
// `basis` must be a live handle; `out` must be valid.
IsonlcsStatus isonlcs_algebra_residual(const IsonlcsBasis *basis,
                                       IsonlcsAlgebraIdentity which,
                                       double *out);

// Growth verdict for the dual-pair series at `alpha = re + i im`:
// writes 1 when the series diverges, 0 when it converges.
//
// # Safety
// `out_diverges` must be valid.
IsonlcsStatus isonlcs_dual_series_diverges(double re,
                                           double im,
                                           uintptr_t n_terms,
                                           int32_t *out_diverges);

// Eigenfunction value `psi_n(x)` of the oscillator (levels 0, 3, 4, ...).
//
// # Safety
// `out` must be valid.
IsonlcsStatus isonlcs_eigen_psi(uintptr_t level, double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISONLCS_H */
