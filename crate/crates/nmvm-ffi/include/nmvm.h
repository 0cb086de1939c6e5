/* C interface for the nmvm portfolio library. */

#ifndef NMVM_H
#define NMVM_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call outcome. Anything but Ok leaves a message behind nmvm_last_error().
 */
typedef enum NmvmStatus {
  NmvmStatus_Ok = 0,
  NmvmStatus_NullPointer = 1,
  NmvmStatus_InvalidUtf8 = 2,
  /**
   * Bad input: malformed JSON, failed validation, wrong buffer length.
   */
  NmvmStatus_InvalidArgument = 3,
  NmvmStatus_Numeric = 4,
  /**
   * The objective has no finite maximizer for this model and utility.
   */
  NmvmStatus_Degenerate = 5,
  NmvmStatus_Panic = 6,
} NmvmStatus;

/**
 * Opaque validated market model.
 */
typedef struct NmvmModelHandle NmvmModelHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Pointer to the calling thread's last error text; empty after a
 * successful call. Valid until the thread's next library call.
 */
const char *nmvm_last_error(void);

/**
 * Parses and validates a model from JSON. On Ok the caller owns the
 * handle and must release it with nmvm_model_free.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be a valid pointer.
 */
enum NmvmStatus nmvm_model_from_json(const char *json, struct NmvmModelHandle **out);

/**
 * Releases a model handle. Null is a no-op.
 *
 * # Safety
 * `h` must be null or a pointer returned by nmvm_model_from_json that
 * has not been freed yet.
 */
void nmvm_model_free(struct NmvmModelHandle *h);

/**
 * Number of risky assets.
 *
 * # Safety
 * `h` must be a live model handle; `out_d` a valid pointer.
 */
enum NmvmStatus nmvm_model_dim(const struct NmvmModelHandle *h, uintptr_t *out_d);

/**
 * Closed-form exponential-utility optimum. `weights` must hold exactly
 * `nmvm_model_dim` entries; the minimizer location, expected utility and
 * certainty equivalent land in the scalar outputs (null skips one).
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum NmvmStatus nmvm_exp_optimal(const struct NmvmModelHandle *h,
                                 double a,
                                 double w0,
                                 double *weights,
                                 uintptr_t weights_len,
                                 double *out_q_min,
                                 double *out_expected_utility,
                                 double *out_certainty_equivalent);

/**
 * Exponential-utility optimum under the no-short-sales constraint.
 * `active` (length d, may be null) receives 1 where the constraint pins
 * the asset to zero.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum NmvmStatus nmvm_exp_short_sales(const struct NmvmModelHandle *h,
                                     double a,
                                     double w0,
                                     double *weights,
                                     uintptr_t weights_len,
                                     uint8_t *active,
                                     double *out_expected_utility);

/**
 * General concave-utility optimum through the one-dimensional reduction.
 * The utility spec is JSON, e.g. {"family":"sahara","params":{"a":2,"b":1}}.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum NmvmStatus nmvm_concave_optimal(const struct NmvmModelHandle *h,
                                     const char *utility_json,
                                     double w0,
                                     double *weights,
                                     uintptr_t weights_len,
                                     double *out_c_star,
                                     double *out_lambda,
                                     double *out_expected_utility,
                                     double *out_certainty_equivalent);

/**
 * Normalized composition of the risky block shared by every optimal
 * portfolio of the model (two-fund separation).
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum NmvmStatus nmvm_tangent_skew(const struct NmvmModelHandle *h,
                                  double *weights,
                                  uintptr_t weights_len);

/**
 * Monte-Carlo estimate of expected utility for a fixed portfolio;
 * deterministic for a given seed.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum NmvmStatus nmvm_mc_expected_utility(const struct NmvmModelHandle *h,
                                         const char *utility_json,
                                         double w0,
                                         const double *weights,
                                         uintptr_t weights_len,
                                         uintptr_t n_samples,
                                         uint64_t seed,
                                         double *out_estimate,
                                         double *out_std_error);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NMVM_H */
