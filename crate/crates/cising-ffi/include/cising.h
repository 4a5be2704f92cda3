/* C interface for the cising library. */

#ifndef CISING_H
#define CISING_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; nonzero means the out-parameters are untouched and
 * `cising_last_error` carries a message.
 */
typedef enum CisingStatus {
  CisingStatus_Ok = 0,
  CisingStatus_InternalError = 1,
  CisingStatus_InvalidInput = 2,
  CisingStatus_CapExceeded = 3,
  CisingStatus_Indeterminate = 4,
} CisingStatus;

/**
 * Opaque handle to an exact or certified-approximate complex value.
 */
typedef struct CisingValue CisingValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread, or null if none. Caller frees the
 * returned string with `cising_string_free`.
 */
char *cising_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void cising_string_free(char *s);

/**
 * Release a value handle.
 *
 * # Safety
 * `v` must have been returned by this library and not freed before.
 */
void cising_value_free(struct CisingValue *v);

/**
 * Evaluate the Ising partition function of a graph described in the
 * graph-file grammar. `y` and `lambda` are fallback weights in the weight
 * grammar (`rou(k,N)`, `polarpi(r,a,b)`, `real(p/q)`, `rect(re,im)`) and
 * may be null when the file carries its own weights. On success `*out`
 * receives a new handle.
 *
 * # Safety
 * Pointer arguments must satisfy the module-level contract.
 */
enum CisingStatus cising_eval_ising(const char *graph_text,
                                    const char *y,
                                    const char *lambda,
                                    struct CisingValue **out);

/**
 * Exact probability of the measurement recorded in an IQP circuit file.
 *
 * # Safety
 * Pointer arguments must satisfy the module-level contract.
 */
enum CisingStatus cising_simulate_iqp(const char *circuit_text, struct CisingValue **out);

/**
 * Classify the approximation complexity of an edge weight. On success
 * `*out_verdict` receives a new string (e.g. "SHARP_P_HARD") and
 * `*out_item` the clause number of the classification theorem.
 *
 * # Safety
 * Pointer arguments must satisfy the module-level contract.
 */
enum CisingStatus cising_classify_weight(const char *y, char **out_verdict, uint8_t *out_item);

/**
 * Count minimum s-t cuts of the graph file's `terminals` pair through the
 * noisy-oracle bisection, cross-checked against brute force. `noise` is a
 * rational like "22/21".
 *
 * # Safety
 * Pointer arguments must satisfy the module-level contract.
 */
enum CisingStatus cising_count_min_cuts(const char *graph_text,
                                        const char *noise,
                                        uint64_t seed,
                                        uintptr_t *out_k,
                                        uint64_t *out_count);

/**
 * 1 if the value is exact (a cyclotomic number), 0 for a certified
 * floating disk, -1 on a null handle.
 *
 * # Safety
 * `v` must be a live handle or null.
 */
int32_t cising_value_is_exact(const struct CisingValue *v);

/**
 * Decimal rendering "re + im i" with the given digit count; caller frees.
 * Returns null on a null handle.
 *
 * # Safety
 * `v` must be a live handle or null.
 */
char *cising_value_decimal(const struct CisingValue *v, uint32_t digits);

/**
 * Upper bound on the distance between the decimal rendering and the true
 * value, as a decimal string; caller frees.
 *
 * # Safety
 * `v` must be a live handle or null.
 */
char *cising_value_error_radius(const struct CisingValue *v, uint32_t digits);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CISING_H */
