#ifndef KNOTTORSION_H
#define KNOTTORSION_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KtStatus {
  KT_STATUS_OK = 0,
  /**
   * Bad knot, trace, tolerance or index.
   */
  KT_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The trace is degenerate or not generic; retry nearby.
   */
  KT_STATUS_NON_GENERIC = 2,
  /**
   * A numerical consistency check failed.
   */
  KT_STATUS_NUMERICAL = 3,
  /**
   * The output buffer is too small or a value does not fit.
   */
  KT_STATUS_OUT_OF_RANGE = 4,
  KT_STATUS_NULL_POINTER = 5,
  KT_STATUS_PANIC = 6,
} KtStatus;

typedef struct KtConnectedSum KtConnectedSum;

typedef struct KtLevelSet KtLevelSet;

typedef struct KtTolerance {
  double rank_tol;
  double residual_tol;
  double root_tol;
} KtTolerance;

/**
 * The two-bridge knot `K(p, q)`.
 */
typedef struct KtKnot {
  int64_t p;
  int64_t q;
} KtKnot;

typedef struct KtComplex {
  double re;
  double im;
} KtComplex;

/**
 * One irreducible character on a level set. `torsion` is NaN when the
 * point is not regular.
 */
typedef struct KtPoint {
  struct KtComplex u;
  struct KtComplex m;
  struct KtComplex trace_longitude;
  bool regular;
  struct KtComplex torsion;
} KtPoint;

typedef struct KtVanishing {
  size_t components;
  /**
   * Sum of reciprocal torsions over all components.
   */
  struct KtComplex sum;
  double abs_sum;
  /**
   * `|sum| / abs_sum`.
   */
  double relative;
  double expansion_residual;
} KtVanishing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *kt_version(void);

/**
 * Message of the most recent failed call on this thread, or NULL. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *kt_last_error_message(void);

struct KtTolerance kt_tolerance_default(void);

/**
 * Fills `out` from a named profile: `default`, `strict` or `loose`.
 *
 * # Safety
 * `name` must be NULL or a NUL-terminated string; `out` must be NULL or
 * writable.
 */
enum KtStatus kt_tolerance_profile(const char *name, struct KtTolerance *out);

/**
 * Alexander polynomial coefficients, constant term first. `*len` is always
 * set to the number of coefficients; if `cap` is smaller, nothing is
 * written and `KT_STATUS_OUT_OF_RANGE` is returned.
 *
 * # Safety
 * `coeffs` must hold `cap` values (it may be NULL when `cap` is 0); `len`
 * must be writable.
 */
enum KtStatus kt_alexander(struct KtKnot k, int64_t *coeffs, size_t cap, size_t *len);

/**
 * Irreducible characters of `K(p, q)` with meridian trace `c`, with their
 * torsions. `tol` may be NULL for the default tolerances.
 *
 * # Safety
 * `tol` must be NULL or valid; `out` must be writable.
 */
enum KtStatus kt_level_set_new(struct KtKnot k,
                               struct KtComplex c,
                               const struct KtTolerance *tol,
                               struct KtLevelSet **out);

/**
 * Number of points; 0 for NULL.
 *
 * # Safety
 * `ls` must be NULL or a live handle.
 */
size_t kt_level_set_len(const struct KtLevelSet *ls);

/**
 * # Safety
 * `ls` must be a live handle and `out` writable.
 */
enum KtStatus kt_level_set_point(const struct KtLevelSet *ls, size_t index, struct KtPoint *out);

/**
 * # Safety
 * `ls` must be NULL or a handle from `kt_level_set_new` not yet freed.
 */
void kt_level_set_free(struct KtLevelSet *ls);

/**
 * Level sets of the connected sum of `n` two-bridge knots at meridian
 * trace `c`.
 *
 * # Safety
 * `factors` must hold `n` knots; `tol` must be NULL or valid; `out` must
 * be writable.
 */
enum KtStatus kt_connected_sum_new(const struct KtKnot *factors,
                                   size_t n,
                                   struct KtComplex c,
                                   const struct KtTolerance *tol,
                                   struct KtConnectedSum **out);

/**
 * Number of factors; 0 for NULL.
 *
 * # Safety
 * `cs` must be NULL or a live handle.
 */
size_t kt_connected_sum_factor_count(const struct KtConnectedSum *cs);

/**
 * Number of components with at least one irreducible factor; 0 for NULL.
 *
 * # Safety
 * `cs` must be NULL or a live handle.
 */
size_t kt_connected_sum_component_count(const struct KtConnectedSum *cs);

/**
 * Writes the factor choices of component `index`: `-1` for the abelian
 * factor, `k >= 0` for the `k`-th irreducible character. `cap` must be at
 * least the factor count.
 *
 * # Safety
 * `cs` must be a live handle and `choices` must hold `cap` values.
 */
enum KtStatus kt_connected_sum_component(const struct KtConnectedSum *cs,
                                         size_t index,
                                         int32_t *choices,
                                         size_t cap);

/**
 * Torsion of component `index`.
 *
 * # Safety
 * `cs` must be a live handle and `out` writable.
 */
enum KtStatus kt_connected_sum_torsion(const struct KtConnectedSum *cs,
                                       size_t index,
                                       struct KtComplex *out);

/**
 * Sum of reciprocal torsions over all components.
 *
 * # Safety
 * `cs` must be a live handle and `out` writable.
 */
enum KtStatus kt_connected_sum_vanishing(const struct KtConnectedSum *cs, struct KtVanishing *out);

/**
 * # Safety
 * `cs` must be NULL or a handle from `kt_connected_sum_new` not yet freed.
 */
void kt_connected_sum_free(struct KtConnectedSum *cs);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNOTTORSION_H */
