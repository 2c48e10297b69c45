#ifndef PADELAB_H
#define PADELAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Plane the roots are reported in.
 */
typedef enum PadelabPlane {
  /**
   * The embedding parameter α.
   */
  PADELAB_PLANE_ALPHA = 0,
  /**
   * The inverse plane `z = 1/α`.
   */
  PADELAB_PLANE_INVERSE = 1,
} PadelabPlane;

/**
 * Which roots of a root set to copy out.
 */
typedef enum PadelabRootKind {
  PADELAB_ROOT_KIND_POLES = 0,
  PADELAB_ROOT_KIND_ZEROS = 1,
} PadelabRootKind;

/**
 * Result code of every fallible call.
 */
typedef enum PadelabStatus {
  PADELAB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PADELAB_STATUS_NULL_POINTER = 1,
  /**
   * An argument is out of range or not valid UTF-8.
   */
  PADELAB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Reading or parsing a case file failed.
   */
  PADELAB_STATUS_INGEST = 3,
  /**
   * The network case is inconsistent.
   */
  PADELAB_STATUS_INVALID_CASE = 4,
  /**
   * A numerical routine failed (singular system, degenerate block, no convergence...).
   */
  PADELAB_STATUS_NUMERIC = 5,
  /**
   * The caller's buffer is too small; nothing was written.
   */
  PADELAB_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * A panic was caught at the boundary.
   */
  PADELAB_STATUS_PANIC = 7,
} PadelabStatus;

/**
 * Opaque network case.
 */
typedef struct PadelabCase PadelabCase;

/**
 * Opaque pole/zero set of a diagonal Padé approximant.
 */
typedef struct PadelabRoots PadelabRoots;

/**
 * Opaque truncated power series.
 */
typedef struct PadelabSeries PadelabSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *padelab_version(void);

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next padelab call on the same thread.
 */
const char *padelab_last_error(void);

/**
 * Reads a MATPOWER `.m` case file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` a writable handle slot.
 */
enum PadelabStatus padelab_case_from_matpower(const char *path, struct PadelabCase **out);

/**
 * Reads a native TOML case file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` a writable handle slot.
 */
enum PadelabStatus padelab_case_from_native(const char *path, struct PadelabCase **out);

/**
 * Slack + one PQ bus whose voltage has branch points at `bp_neg < 0 < bp_pos`.
 *
 * # Safety
 * `out` must be a writable handle slot.
 */
enum PadelabStatus padelab_case_two_bus(double bp_neg, double bp_pos, struct PadelabCase **out);

/**
 * Number of buses, 0 for a null handle.
 *
 * # Safety
 * `case` must be null or a live handle.
 */
size_t padelab_case_bus_count(const struct PadelabCase *case_);

/**
 * Multiplies every bus injection by `s`.
 *
 * # Safety
 * `case` must be a live handle.
 */
enum PadelabStatus padelab_case_scale(struct PadelabCase *case_, double s);

/**
 * # Safety
 * `case` must be null or a handle not yet freed.
 */
void padelab_case_free(struct PadelabCase *case_);

/**
 * Maclaurin series of bus `bus_id`'s voltage through `order`.
 *
 * # Safety
 * `case` must be a live handle; `out` a writable handle slot.
 */
enum PadelabStatus padelab_series_hem(const struct PadelabCase *case_,
                                      uint32_t bus_id,
                                      size_t order,
                                      struct PadelabSeries **out);

/**
 * Series from `len ≥ 1` coefficients given as split real/imaginary arrays.
 *
 * # Safety
 * `re` and `im` must each point to `len` readable doubles.
 */
enum PadelabStatus padelab_series_from_coeffs(const double *re,
                                              const double *im,
                                              size_t len,
                                              struct PadelabSeries **out);

/**
 * Copies the coefficients out; see [`padelab_roots_copy`] for the buffer protocol.
 *
 * # Safety
 * `series` must be a live handle; buffers must hold `cap` doubles.
 */
enum PadelabStatus padelab_series_coeffs(const struct PadelabSeries *series,
                                         double *re,
                                         double *im,
                                         size_t cap,
                                         size_t *len_out);

/**
 * # Safety
 * `series` must be null or a handle not yet freed.
 */
void padelab_series_free(struct PadelabSeries *series);

/**
 * Poles and zeros of the `[m/m]` approximant (needs `2m ≤` series order).
 *
 * # Safety
 * `series` must be a live handle; `out` a writable handle slot.
 */
enum PadelabStatus padelab_roots_diagonal(const struct PadelabSeries *series,
                                          size_t m,
                                          struct PadelabRoots **out);

/**
 * Copies poles or zeros in the requested plane into `re`/`im`.
 *
 * `len_out` always receives the count. If `cap` is smaller the call returns
 * `BufferTooSmall` without writing, so a first call with `cap = 0` sizes
 * the buffers.
 *
 * # Safety
 * `roots` must be a live handle; buffers must hold `cap` doubles.
 */
enum PadelabStatus padelab_roots_copy(const struct PadelabRoots *roots,
                                      enum PadelabRootKind kind,
                                      enum PadelabPlane plane,
                                      double *re,
                                      double *im,
                                      size_t cap,
                                      size_t *len_out);

/**
 * # Safety
 * `roots` must be null or a handle not yet freed.
 */
void padelab_roots_free(struct PadelabRoots *roots);

/**
 * Empirical convergence factor of bus `bus_id` at real `alpha`, fitted over
 * the approximant orders `ms[0..n_ms]`.
 *
 * # Safety
 * `case` must be a live handle; `ms` must point to `n_ms` values.
 */
enum PadelabStatus padelab_cf_hat(const struct PadelabCase *case_,
                                  uint32_t bus_id,
                                  double alpha,
                                  const size_t *ms,
                                  size_t n_ms,
                                  double *out);

/**
 * Logarithmic capacity of the segment `[a, b]` estimated from `n` Fekete points.
 *
 * # Safety
 * `out` must be writable.
 */
enum PadelabStatus padelab_segment_capacity(double a, double b, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADELAB_H */
