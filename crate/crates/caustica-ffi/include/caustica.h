#ifndef CAUSTICA_H
#define CAUSTICA_H

/* Generated by cbindgen from caustica-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum CausticaStatus {
  CAUSTICA_STATUS_OK = 0,
  /**
   * Argument outside the mathematical domain.
   */
  CAUSTICA_STATUS_DOMAIN = 1,
  /**
   * Invalid index (zero in a 1-based convention, or out of range).
   */
  CAUSTICA_STATUS_INDEX = 2,
  /**
   * Iteration failed to converge.
   */
  CAUSTICA_STATUS_NO_CONVERGENCE = 3,
  /**
   * A numerical invariant failed.
   */
  CAUSTICA_STATUS_NUMERICAL = 4,
  /**
   * Grid too coarse for the requested frequency.
   */
  CAUSTICA_STATUS_RESOLUTION = 5,
  /**
   * Operation not supported for this input.
   */
  CAUSTICA_STATUS_UNSUPPORTED = 6,
  /**
   * Bad configuration value.
   */
  CAUSTICA_STATUS_CONFIG = 7,
  /**
   * Null pointer argument.
   */
  CAUSTICA_STATUS_NULL_POINTER = 8,
  /**
   * Unexpected internal failure (caught panic).
   */
  CAUSTICA_STATUS_INTERNAL = 99,
} CausticaStatus;

/**
 * Opaque disk band handle.
 */
typedef struct CausticaDiskBand CausticaDiskBand;

/**
 * Opaque revolution band handle.
 */
typedef struct CausticaRevBand CausticaRevBand;

/**
 * One band member as seen through the C ABI.
 */
typedef struct CausticaMode {
  /**
   * Frequency λ_{k,n}.
   */
  double lambda;
  /**
   * Angular momentum magnitude |n|.
   */
  uint32_t n;
  /**
   * Radial index, 1-based.
   */
  uint32_t k;
  /**
   * Clairaut parameter |n|/λ.
   */
  double mu;
  /**
   * Cutoff weight φ((λ_ν-λ)/δ)² in (0, 1].
   */
  double weight;
  /**
   * 1 for n = 0, 2 for the ±n pair.
   */
  uint8_t multiplicity;
} CausticaMode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *caustica_version(void);

/**
 * Airy function Ai(x).
 */
enum CausticaStatus caustica_airy_ai(double x, double *out);

/**
 * Derivative Ai'(x).
 */
enum CausticaStatus caustica_airy_ai_prime(double x, double *out);

/**
 * k-th zero of Ai as a positive magnitude (1-based k).
 */
enum CausticaStatus caustica_airy_zero(uint32_t k, double *out);

/**
 * Bessel J_n(x) for integer order n >= 0, x >= 0.
 */
enum CausticaStatus caustica_bessel_j(uint32_t n, double x, double *out);

/**
 * Derivative J_n'(x).
 */
enum CausticaStatus caustica_bessel_j_prime(uint32_t n, double x, double *out);

/**
 * k-th positive zero of J_n (1-based k).
 */
enum CausticaStatus caustica_bessel_zero(uint32_t n, uint32_t k, double *out);

/**
 * Transition function p0(t): the z >= 1 solving
 * sqrt(z²-1) - arccos(1/z) = (2/3)t^{3/2}.
 */
enum CausticaStatus caustica_olver_p0(double t, double *out);

/**
 * Build a disk band at level `lambda` and width `delta` (pass delta <= 0
 * for the default λ^{-1/3}); modes with |n| < n_min_fraction·λ are
 * dropped (0 keeps everything).
 */
enum CausticaStatus caustica_disk_band_new(double lambda,
                                           double delta,
                                           double n_min_fraction,
                                           struct CausticaDiskBand **out);

/**
 * Release a disk band handle.
 *
 * # Safety
 * `handle` must come from [`caustica_disk_band_new`] and must not be used
 * afterwards. Passing null is a no-op.
 */
void caustica_disk_band_free(struct CausticaDiskBand *handle);

/**
 * Number of stored (n, k) members of the band.
 *
 * # Safety
 * `handle` must be a live handle from [`caustica_disk_band_new`].
 */
uintptr_t caustica_disk_band_len(const struct CausticaDiskBand *handle);

/**
 * Fetch band member `i` (0-based over the stored members).
 *
 * # Safety
 * `handle` must be a live handle from [`caustica_disk_band_new`].
 */
enum CausticaStatus caustica_disk_band_mode(const struct CausticaDiskBand *handle,
                                            uintptr_t i,
                                            struct CausticaMode *out);

/**
 * Weighted projector sum S(r) = Σ w·mult·|φ(r)|² of a disk band.
 *
 * # Safety
 * `handle` must be a live handle from [`caustica_disk_band_new`].
 */
enum CausticaStatus caustica_disk_band_projector_sum(const struct CausticaDiskBand *handle,
                                                     double r,
                                                     double *out);

/**
 * Sup of the projector sum over the annulus [r_lo, r_hi] ⊂ (0, 1].
 *
 * # Safety
 * `handle` must be a live handle from [`caustica_disk_band_new`].
 */
enum CausticaStatus caustica_disk_band_sup(const struct CausticaDiskBand *handle,
                                           double r_lo,
                                           double r_hi,
                                           double *out_sup,
                                           double *out_argmax);

/**
 * Build a revolution band for a builtin profile ("round" or
 * "perturbed(eps)") at level `lambda`, width `delta` (<= 0 for λ^{-1/3}),
 * inside the cone |n| <= (A - cone_eps)·λ.
 */
enum CausticaStatus caustica_rev_band_new(const char *profile,
                                          double cone_eps,
                                          double lambda,
                                          double delta,
                                          struct CausticaRevBand **out);

/**
 * Release a revolution band handle.
 *
 * # Safety
 * `handle` must come from [`caustica_rev_band_new`] and must not be used
 * afterwards. Passing null is a no-op.
 */
void caustica_rev_band_free(struct CausticaRevBand *handle);

/**
 * Number of stored (n, k) members.
 *
 * # Safety
 * `handle` must be a live handle from [`caustica_rev_band_new`].
 */
uintptr_t caustica_rev_band_len(const struct CausticaRevBand *handle);

/**
 * Fetch band member `i` (0-based).
 *
 * # Safety
 * `handle` must be a live handle from [`caustica_rev_band_new`].
 */
enum CausticaStatus caustica_rev_band_mode(const struct CausticaRevBand *handle,
                                           uintptr_t i,
                                           struct CausticaMode *out);

/**
 * Weighted projector sum S(s) of a revolution band at arclength s.
 *
 * # Safety
 * `handle` must be a live handle from [`caustica_rev_band_new`].
 */
enum CausticaStatus caustica_rev_band_projector_sum(const struct CausticaRevBand *handle,
                                                    double s,
                                                    double *out);

/**
 * Sup of the projector sum over the s-interval [s_lo, s_hi] ⊂ (0, L).
 *
 * # Safety
 * `handle` must be a live handle from [`caustica_rev_band_new`].
 */
enum CausticaStatus caustica_rev_band_sup(const struct CausticaRevBand *handle,
                                          double s_lo,
                                          double s_hi,
                                          double *out_sup,
                                          double *out_argmax);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAUSTICA_H */
