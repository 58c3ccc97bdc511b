#ifndef QSO_H
#define QSO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes.
typedef enum QsoStatus {
  QSO_STATUS_OK = 0,
  QSO_STATUS_NULL_POINTER = 1,
  QSO_STATUS_INVALID_ARGUMENT = 2,
  QSO_STATUS_DIMENSION_MISMATCH = 3,
  QSO_STATUS_INVALID_TENSOR = 4,
  QSO_STATUS_NOT_IN_SIMPLEX = 5,
  QSO_STATUS_NOT_VOLTERRA = 6,
  QSO_STATUS_INVALID_SKEW = 7,
  QSO_STATUS_INVALID_FAMILY = 8,
  QSO_STATUS_PARAMETER_OUT_OF_RANGE = 9,
  QSO_STATUS_DIMENSION_UNSUPPORTED = 10,
  QSO_STATUS_NOT_ORTHOGONALITY_PRESERVING = 11,
  QSO_STATUS_VERTEX_IMAGE_NOT_VERTEX = 12,
  QSO_STATUS_INVALID_PERMUTATION = 13,
  QSO_STATUS_INVALID_KERNEL = 14,
  QSO_STATUS_TOO_LARGE = 15,
  QSO_STATUS_FORMAT = 16,
  QSO_STATUS_BUFFER_TOO_SMALL = 17,
  QSO_STATUS_PANIC = 99,
} QsoStatus;

// How a trajectory ended.
typedef enum QsoTrajectoryKind {
  QSO_TRAJECTORY_KIND_CONVERGED = 0,
  QSO_TRAJECTORY_KIND_CYCLE = 1,
  QSO_TRAJECTORY_KIND_BUDGET_EXHAUSTED = 2,
} QsoTrajectoryKind;

// Opaque validated operator.
typedef struct QsoTensor QsoTensor;

// Opaque trajectory.
typedef struct QsoTrajectory QsoTrajectory;

// A member of one of the six orthogonality-preserving families.
typedef struct QsoOpSpec {
  uint8_t family;
  double alpha;
  double beta;
  double gamma;
} QsoOpSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the next
// failing call on the same thread.
const char *qso_last_error_message(void);

// Library version as a static string.
const char *qso_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not have been freed.
void qso_string_free(char *s);

// Validates the flat coefficients `p[(i*m + j)*m + k]` (length `m^3`).
//
// # Safety
// `p` must point to `len` doubles; `out` must be writable.
enum QsoStatus qso_tensor_new(size_t m,
                              const double *p,
                              size_t len,
                              bool normalize,
                              struct QsoTensor **out);

// Parses a tensor or family-spec JSON document.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum QsoStatus qso_tensor_from_json(const char *json, bool normalize, struct QsoTensor **out);

// Deterministic JSON of the tensor; free with [`qso_string_free`].
//
// # Safety
// `t` must be a live handle; `out` must be writable.
enum QsoStatus qso_tensor_to_json(const struct QsoTensor *t, char **out);

// # Safety
// `t` must come from this library and not have been freed.
void qso_tensor_free(struct QsoTensor *t);

// Number of types `m`, or 0 for a null handle.
//
// # Safety
// `t` must be null or a live handle.
size_t qso_tensor_dim(const struct QsoTensor *t);

// `P[i][j][k]`, 0-based.
//
// # Safety
// `t` must be a live handle; `out` must be writable.
enum QsoStatus qso_tensor_get(const struct QsoTensor *t, size_t i, size_t j, size_t k, double *out);

// `V(x)` written to `out` (capacity `out_len >= m`).
//
// # Safety
// `x` must point to `len` doubles and `out` to `out_len` writable doubles.
enum QsoStatus qso_tensor_apply(const struct QsoTensor *t,
                                const double *x,
                                size_t len,
                                double *out,
                                size_t out_len);

// # Safety
// `t` must be a live handle; `out` must be writable.
enum QsoStatus qso_is_volterra(const struct QsoTensor *t, bool *out);

// Decides `V(x) ≺ x` on the vertices and edge midpoints.
//
// # Safety
// `t` must be a live handle; `out` must be writable.
enum QsoStatus qso_volterra_certificate(const struct QsoTensor *t, bool *out);

// Skew-symmetric canonical matrix, row-major `a[k*m + i]`.
//
// # Safety
// `t` must be a live handle; `out` must hold `out_len >= m*m` doubles.
enum QsoStatus qso_to_canonical(const struct QsoTensor *t, double *out, size_t out_len);

// Volterra operator of a skew-symmetric matrix given row-major.
//
// # Safety
// `a` must point to `m*m` doubles; `out` must be writable.
enum QsoStatus qso_from_canonical(size_t m, const double *a, struct QsoTensor **out);

// Family member on the 2-simplex.
//
// # Safety
// `out` must be writable.
enum QsoStatus qso_op_family(struct QsoOpSpec spec, struct QsoTensor **out);

// # Safety
// `t` must be a live handle; `out` must be writable.
enum QsoStatus qso_is_orthogonality_preserving(const struct QsoTensor *t, bool *out);

// # Safety
// `t` must be a live handle; `out` must be writable.
enum QsoStatus qso_classify_op(const struct QsoTensor *t, struct QsoOpSpec *out);

// Conjugate by the permutation with 1-based images `perm[0..len]`.
//
// # Safety
// `perm` must point to `len` values; `out` must be writable.
enum QsoStatus qso_conjugate(const struct QsoTensor *t,
                             const size_t *perm,
                             size_t len,
                             struct QsoTensor **out);

// # Safety
// `t` must be a live handle; `out` must be writable.
enum QsoStatus qso_associator_residual(const struct QsoTensor *t, double *out);

// # Safety
// `t` must be a live handle; `out` must be writable.
enum QsoStatus qso_is_associative(const struct QsoTensor *t, bool *out);

// The seven reduced conditions for family 2, written to `out[0..7]`.
//
// # Safety
// `out` must hold `out_len >= 7` doubles.
enum QsoStatus qso_v2_condition_system(double alpha,
                                       double beta,
                                       double gamma,
                                       double *out,
                                       size_t out_len);

// Iterates `V` from `x0`.
//
// # Safety
// `x0` must point to `len` doubles; `out` must be writable.
enum QsoStatus qso_iterate(const struct QsoTensor *t,
                           const double *x0,
                           size_t len,
                           size_t max_iter,
                           double tol,
                           struct QsoTrajectory **out);

// # Safety
// `tr` must come from this library and not have been freed.
void qso_trajectory_free(struct QsoTrajectory *tr);

// Number of stored points (iterations + 1), or 0 for null.
//
// # Safety
// `tr` must be null or a live handle.
size_t qso_trajectory_len(const struct QsoTrajectory *tr);

// # Safety
// `tr` must be null or a live handle.
size_t qso_trajectory_dim(const struct QsoTrajectory *tr);

// Point `index` (0 is the initial state).
//
// # Safety
// `tr` must be a live handle; `out` must hold `out_len` doubles.
enum QsoStatus qso_trajectory_point(const struct QsoTrajectory *tr,
                                    size_t index,
                                    double *out,
                                    size_t out_len);

// Final status; `cycle_len` receives the period for cycles and 0 otherwise.
//
// # Safety
// `tr` must be a live handle; `kind` must be writable; `cycle_len` may be null.
enum QsoStatus qso_trajectory_status(const struct QsoTrajectory *tr,
                                     enum QsoTrajectoryKind *kind,
                                     size_t *cycle_len);

// CSV export (`iter,x1..xm,status`); free with [`qso_string_free`].
//
// # Safety
// `tr` must be a live handle; `out` must be writable.
enum QsoStatus qso_trajectory_to_csv(const struct QsoTrajectory *tr, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSO_H */
