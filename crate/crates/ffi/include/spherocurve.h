#ifndef SPHEROCURVE_H
#define SPHEROCURVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of an `spc_*` call.
typedef enum SpcStatus {
  SPC_STATUS_OK = 0,
  // A required pointer was null or a string was not UTF-8.
  SPC_STATUS_NULL_POINTER = 1,
  // Malformed document or argument out of range.
  SPC_STATUS_INVALID_INPUT = 2,
  // Numerical or geometric failure.
  SPC_STATUS_GEOMETRY = 3,
  // Condition (L) or local convexity violated.
  SPC_STATUS_CONDITION = 4,
  // The curve lives in the wrong dimension for this call.
  SPC_STATUS_WRONG_SPACE = 5,
  // Internal panic; the handle arguments are left untouched.
  SPC_STATUS_PANIC = 6,
} SpcStatus;

// Opaque curve on `S2` or `S3`.
typedef struct SpcCurve SpcCurve;

// Opaque pair of curves on `S2`.
typedef struct SpcPair SpcPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *spc_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or come from this library and not be freed twice.
void spc_string_free(char *s);

// Circle of length `c` on `S2`, traversed `m` times.
//
// # Safety
// `out` must be a valid pointer.
enum SpcStatus spc_curve_sigma(double c, double m, struct SpcCurve **out);

// The curve on `S3` with constant curvature `2/sqrt(3)` and torsion 1,
// traversed `m` times.
//
// # Safety
// `out` must be a valid pointer.
enum SpcStatus spc_curve_gamma1(double m, struct SpcCurve **out);

// Curve from a JSON curve document.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum SpcStatus spc_curve_from_json(const char *json, struct SpcCurve **out);

// # Safety
// `curve` must be null or a live handle not freed before.
void spc_curve_free(struct SpcCurve *curve);

// Ambient dimension, 3 or 4; 0 for a null handle.
//
// # Safety
// `curve` must be null or a live handle.
size_t spc_curve_dim(const struct SpcCurve *curve);

// Writes the point at `t` into `out`, which holds `spc_curve_dim` doubles.
//
// # Safety
// `curve` must be a live handle and `out` must hold enough doubles.
enum SpcStatus spc_curve_point(const struct SpcCurve *curve, double t, double *out);

// Frenet frame at `t` (row-major, `dim * dim` doubles, rows are the frame
// vectors), geodesic curvature and, on `S3`, torsion (`NaN` on `S2`).
// `frame` may be null.
//
// # Safety
// `curve` must be a live handle; non-null outputs must be valid.
enum SpcStatus spc_curve_frenet(const struct SpcCurve *curve,
                                double t,
                                double *frame,
                                double *kappa,
                                double *tau);

// Splits a curve on `S3` into its left and right parts on `S2`, sampled
// on `samples` intervals.
//
// # Safety
// `curve` must be a live handle and `out` a valid pointer.
enum SpcStatus spc_decompose(const struct SpcCurve *curve, size_t samples, struct SpcPair **out);

// Pair from a JSON pair document.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum SpcStatus spc_pair_from_json(const char *json, struct SpcPair **out);

// Left and right parts of a pair as JSON curve documents.
//
// # Safety
// `pair` must be a live handle and `out` a valid pointer.
enum SpcStatus spc_pair_to_json(const struct SpcPair *pair, char **out);

// # Safety
// `pair` must be null or a live handle not freed before.
void spc_pair_free(struct SpcPair *pair);

// Rebuilds the curve on `S3` from a pair. `endpoint` (may be null)
// receives the lifted endpoint `(zl, zr)` as eight doubles `a, b, c, d`.
//
// # Safety
// `pair` must be a live handle, `out` a valid pointer and `endpoint` null
// or room for eight doubles.
enum SpcStatus spc_compose(const struct SpcPair *pair, struct SpcCurve **out, double *endpoint);

// Convexity report of a curve on `S3` as JSON.
//
// # Safety
// `curve` must be a live handle and `out` a valid pointer.
enum SpcStatus spc_convexity_json(const struct SpcCurve *curve,
                                  size_t samples,
                                  uint64_t seed,
                                  char **out);

// Rotation number of a closed curve on `S2` lying in a closed hemisphere.
//
// # Safety
// `curve` must be a live handle and `out` a valid pointer.
enum SpcStatus spc_rotation_number(const struct SpcCurve *curve, size_t samples, int64_t *out);

// Curve sampled on `samples` intervals as a JSON curve document.
//
// # Safety
// `curve` must be a live handle and `out` a valid pointer.
enum SpcStatus spc_curve_to_json(const struct SpcCurve *curve, size_t samples, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHEROCURVE_H */
