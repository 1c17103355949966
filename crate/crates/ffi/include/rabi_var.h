#ifndef RABI_VAR_H
#define RABI_VAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RabiStatus {
  RABI_STATUS_OK = 0,
  RABI_STATUS_NULL_POINTER = 1,
  RABI_STATUS_INVALID_PARAMETER = 2,
  RABI_STATUS_DOMAIN = 3,
  RABI_STATUS_NOT_CONVERGED = 4,
  RABI_STATUS_BUFFER_TOO_SMALL = 5,
  RABI_STATUS_PANIC = 6,
} RabiStatus;

typedef enum RabiMethod {
  // Global minimum of the energy functional.
  RABI_METHOD_VARIATIONAL = 0,
  // Small-coupling fixed-point displacement.
  RABI_METHOD_FIXED_POINT = 1,
  // Displacement fixed at `g/omega`.
  RABI_METHOD_GRWA = 2,
} RabiMethod;

typedef enum RabiRegime {
  // Large coupling.
  RABI_REGIME_I = 1,
  // Small coupling or weak splitting.
  RABI_REGIME_II = 2,
  // Intermediate coupling.
  RABI_REGIME_III = 3,
} RabiRegime;

// Opaque exact ground state.
typedef struct RabiExact RabiExact;

// Opaque model parameters.
typedef struct RabiParams RabiParams;

typedef struct RabiObservables {
  // `<a^dagger a>`
  double mean_photon;
  // `<sigma_z (a^dagger + a)>`
  double sz_correlation;
  // `<sigma_x>`
  double sigma_x;
} RabiObservables;

typedef struct RabiVariational {
  double lambda;
  double theta;
  double energy;
  double alpha;
  double beta;
  struct RabiObservables observables;
  double gradient_residual;
} RabiVariational;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *rabi_version(void);

// Message of the last failed call on this thread, or an empty string.
// The pointer stays valid until the next call into this library on the
// same thread.
const char *rabi_last_error_message(void);

// Creates a parameter handle for
// `H = omega a^dagger a - (Omega/2) sigma_x + (epsilon/2) sigma_z + g sigma_z (a^dagger + a)`.
//
// # Safety
// `out` must be valid for a pointer write.
enum RabiStatus rabi_params_new(double omega,
                                double big_omega,
                                double epsilon,
                                double g,
                                struct RabiParams **out);

// Creates a parameter handle from the biased form
// `omega a^dagger a + g sigma_x (a + a^dagger) + delta sigma_z + epsilon_prime sigma_x`.
//
// # Safety
// `out` must be valid for a pointer write.
enum RabiStatus rabi_params_from_biased(double omega,
                                        double delta,
                                        double epsilon_prime,
                                        double g,
                                        struct RabiParams **out);

// Releases a parameter handle. NULL is ignored.
//
// # Safety
// `p` is NULL or a handle not yet freed.
void rabi_params_free(struct RabiParams *p);

// Reads the four rotated-form parameters. Any output pointer may be NULL.
//
// # Safety
// `p` is a live handle; non-NULL outputs are valid for writes.
enum RabiStatus rabi_params_get(const struct RabiParams *p,
                                double *omega,
                                double *big_omega,
                                double *epsilon,
                                double *g);

// Variational energy `E0(lambda)`.
//
// # Safety
// `p` is a live handle and `out` is valid for a write.
enum RabiStatus rabi_energy_functional(const struct RabiParams *p, double lambda, double *out);

// `dE0/dlambda`.
//
// # Safety
// `p` is a live handle and `out` is valid for a write.
enum RabiStatus rabi_energy_gradient(const struct RabiParams *p, double lambda, double *out);

// Variational ground state. `tol` and `max_iter` configure the minimizer
// and are ignored by the closed-form methods; pass 0 for the defaults.
//
// # Safety
// `p` is a live handle and `out` is valid for a write.
enum RabiStatus rabi_solve_variational(const struct RabiParams *p,
                                       enum RabiMethod method,
                                       double tol,
                                       size_t max_iter,
                                       struct RabiVariational *out);

// Regime classification of a parameter point.
//
// # Safety
// `p` is a live handle and `out` is valid for a write.
enum RabiStatus rabi_classify_regime(const struct RabiParams *p, enum RabiRegime *out);

// Exact ground state by truncated-basis diagonalization. `n_max` caps the
// Fock cutoff; 0 selects the default.
//
// # Safety
// `p` is a live handle and `out` is valid for a pointer write.
enum RabiStatus rabi_exact_solve(const struct RabiParams *p, size_t n_max, struct RabiExact **out);

// Releases an exact solution. NULL is ignored.
//
// # Safety
// `s` is NULL or a handle not yet freed.
void rabi_exact_free(struct RabiExact *s);

// Ground energy, or NaN for a NULL handle.
//
// # Safety
// `s` is NULL or a live handle.
double rabi_exact_energy(const struct RabiExact *s);

// Fock cutoff at which the solution converged, or 0 for a NULL handle.
//
// # Safety
// `s` is NULL or a live handle.
size_t rabi_exact_cutoff(const struct RabiExact *s);

// Ground-state observables and `<sigma_z>`. `sigma_z` may be NULL.
//
// # Safety
// `s` is a live handle, `out` is valid for a write, `sigma_z` is NULL or
// valid for a write.
enum RabiStatus rabi_exact_observables(const struct RabiExact *s,
                                       struct RabiObservables *out,
                                       double *sigma_z);

// Copies the ground eigenvector, spin-major: amplitudes of `|down, n>` for
// `n = 0..=cutoff` followed by those of `|up, n>`. `len` is always set to
// the vector length; pass a NULL `buf` to query it.
//
// # Safety
// `s` is a live handle, `len` is valid for reads and writes, and `buf` is
// NULL or valid for `*len` writes.
enum RabiStatus rabi_exact_vector(const struct RabiExact *s, double *buf, size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RABI_VAR_H */
