#ifndef EINSTEIN4_H
#define EINSTEIN4_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum E4Status {
  E4_STATUS_OK = 0,
  E4_STATUS_NULL_POINTER = 1,
  E4_STATUS_PARSE = 2,
  E4_STATUS_SYMMETRY = 3,
  E4_STATUS_NOT_EINSTEIN = 4,
  E4_STATUS_NON_POSITIVE_LAMBDA = 5,
  E4_STATUS_INVALID_BERGER = 6,
  E4_STATUS_OUT_OF_RANGE = 7,
  E4_STATUS_UNKNOWN_CONDITION = 8,
  E4_STATUS_INFEASIBLE = 9,
  E4_STATUS_INVALID_ARGUMENT = 10,
  E4_STATUS_IO = 11,
  E4_STATUS_PANIC = 12,
} E4Status;

/*
 Berger normal form of an Einstein curvature operator.
 */
typedef struct E4Berger E4Berger;

/*
 Algebraic curvature tensor.
 */
typedef struct E4Tensor E4Tensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or an empty string. The
 pointer stays valid until the next call into this library on the thread.
 */
const char *e4_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *e4_version(void);

/*
 Builds a tensor from 256 components, checking the curvature symmetries at
 `tol` (NaN selects the default tolerance).

 # Safety
 `components` must point to 256 doubles and `out` must be writable.
 */
enum E4Status e4_tensor_from_components(const double *components,
                                        double tol,
                                        struct E4Tensor **out);

/*
 Parses an input document (TOML text) into a tensor.

 # Safety
 `text` must be a NUL-terminated string and `out` writable.
 */
enum E4Status e4_tensor_from_document(const char *text, double tol, struct E4Tensor **out);

/*
 # Safety
 `tensor` must be valid and `out` must point to 256 writable doubles.
 */
enum E4Status e4_tensor_components(const struct E4Tensor *tensor, double *out);

/*
 Sectional curvature of the plane spanned by `u` and `v`.

 # Safety
 `u`, `v` point to 4 doubles each; `out` writable.
 */
enum E4Status e4_tensor_sectional(const struct E4Tensor *tensor,
                                  const double *u,
                                  const double *v,
                                  double *out);

/*
 `2(B_ijkl − B_ijlk + B_ikjl − B_iljk)` with `B_ijkl = Σ R_imjp R_kmlp`.

 # Safety
 `tensor` valid, `out` writable.
 */
enum E4Status e4_tensor_b_combination(const struct E4Tensor *tensor,
                                      size_t i,
                                      size_t j,
                                      size_t k,
                                      size_t l,
                                      double *out);

/*
 # Safety
 `tensor` must come from this library and not be used afterwards.
 */
void e4_tensor_free(struct E4Tensor *tensor);

/*
 # Safety
 `a`, `b` point to 3 doubles each; `out` writable.
 */
enum E4Status e4_berger_new(const double *a,
                            const double *b,
                            double lambda,
                            double tol,
                            struct E4Berger **out);

/*
 Berger form of an Einstein tensor with positive Einstein constant.

 # Safety
 `tensor` valid, `out` writable.
 */
enum E4Status e4_berger_from_tensor(const struct E4Tensor *tensor,
                                    double tol,
                                    struct E4Berger **out);

/*
 Named spaces: 0 round sphere, 1 complex projective plane, 2 product of
 two 2-spheres.

 # Safety
 `out` writable.
 */
enum E4Status e4_berger_named(uint32_t space, double lambda, struct E4Berger **out);

/*
 # Safety
 `form` valid; `a`, `b` point to 3 writable doubles; `lambda` writable.
 */
enum E4Status e4_berger_parts(const struct E4Berger *form, double *a, double *b, double *lambda);

/*
 Curvature tensor in the Berger frame.

 # Safety
 `form` valid, `out` writable.
 */
enum E4Status e4_berger_tensor(const struct E4Berger *form, struct E4Tensor **out);

/*
 Margin of a named condition (`"3-positive"`, `"pic"`, `"K>1/12"`, ...)
 at Einstein constant 1. The condition holds when the margin is positive.

 # Safety
 `form` valid, `condition` NUL-terminated, `out` writable.
 */
enum E4Status e4_berger_condition_margin(const struct E4Berger *form,
                                         const char *condition,
                                         double *out);

/*
 Sum of the `k` smallest curvature operator eigenvalues.

 # Safety
 `form` valid, `out` writable.
 */
enum E4Status e4_berger_k_positive_margin(const struct E4Berger *form, size_t k, double *out);

/*
 # Safety
 `form` must come from this library and not be used afterwards.
 */
void e4_berger_free(struct E4Berger *form);

/*
 Minimum of the smallest half-Weyl eigenvalue when the largest is `l`,
 numerically and from the closed form.

 # Safety
 `numeric` and `analytic` writable.
 */
enum E4Status e4_half_weyl_bound(double l, double *numeric, double *analytic);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EINSTEIN4_H */
