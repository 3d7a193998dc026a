/* C interface to the seqrac simulator core. Generated; do not edit. */

#ifndef SEQRAC_H
#define SEQRAC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of a C-interface call.
 */
typedef enum SeqracStatus {
  /**
   * The call succeeded and all outputs are valid.
   */
  SeqracStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  SeqracStatus_NullArgument = 1,
  /**
   * Inputs were outside the domain or mutually inconsistent.
   */
  SeqracStatus_InvalidInput = 2,
  /**
   * An input-output failure (not raised by the current entry points).
   */
  SeqracStatus_Io = 3,
  /**
   * Text could not be parsed (malformed JSON or invalid UTF-8).
   */
  SeqracStatus_Parse = 4,
  /**
   * An unexpected internal failure; the process state is intact.
   */
  SeqracStatus_Internal = 5,
} SeqracStatus;

/**
 * Opaque handle to a full strategy (preparations, instruments,
 * measurements).
 */
typedef struct SeqracStrategy SeqracStrategy;

/**
 * Two-sided sharpness certificate from a witness pair.
 */
typedef struct SeqracCertificate {
  double eta_lo;
  double eta_hi;
  /**
   * False when the lower bound degenerates to 0.
   */
  bool lower_nontrivial;
  /**
   * False when the upper bound degenerates to 1.
   */
  bool upper_nontrivial;
} SeqracCertificate;

/**
 * Summary of aligning a strategy with the coordinate-axis form.
 */
typedef struct SeqracCanonReport {
  /**
   * Whether every residual is below the supplied tolerance.
   */
  bool pass;
  /**
   * Whether the match required complex conjugation.
   */
  bool conjugated;
  /**
   * Sharpness recovered from the first reader's observables.
   */
  double eta;
  /**
   * Largest alignment residual across all parties.
   */
  double max_residual;
} SeqracCanonReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if no call
 * has failed yet. Owned by the library; do not free.
 */
const char *seqrac_last_error(void);

/**
 * Version of the underlying library as a static string; do not free.
 */
const char *seqrac_version(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `text` must have been returned by a `seqrac_*` call and not freed before.
 */
void seqrac_string_free(char *text);

/**
 * Release a strategy handle. Null is ignored.
 *
 * # Safety
 * `handle` must have been returned by a `seqrac_strategy_*` constructor and
 * not freed before.
 */
void seqrac_strategy_free(struct SeqracStrategy *handle);

/**
 * Build the ideal strategy at sharpness `eta` (0 to 1).
 */
enum SeqracStatus seqrac_strategy_ideal(double eta, struct SeqracStrategy **out);

/**
 * Draw a seeded random strategy. `mode` selects the ensemble: 0 general
 * (mixed preparations, biased instruments), 1 pure preparations, 2 the
 * ideal family under a random rotation.
 */
enum SeqracStatus seqrac_strategy_random(uint64_t seed, uint32_t mode, struct SeqracStrategy **out);

/**
 * Parse a strategy from its JSON form.
 *
 * # Safety
 * `json` must be a valid NUL-terminated C string.
 */
enum SeqracStatus seqrac_strategy_from_json(const char *json, struct SeqracStrategy **out);

/**
 * Serialize a strategy to JSON. The returned string is released with
 * `seqrac_string_free`.
 *
 * # Safety
 * `handle` must be a live strategy handle.
 */
enum SeqracStatus seqrac_strategy_to_json(const struct SeqracStrategy *handle, char **out);

/**
 * Simulate the strategy and return both correlation witnesses.
 *
 * # Safety
 * `handle` must be a live strategy handle.
 */
enum SeqracStatus seqrac_witnesses(const struct SeqracStrategy *handle, double *a_ab, double *a_ac);

/**
 * Largest second-reader witness compatible with first-reader score `a_ab`.
 */
enum SeqracStatus seqrac_tradeoff_bound(double a_ab, double *out);

/**
 * Two-sided sharpness certificate from an observed witness pair.
 */
enum SeqracStatus seqrac_certify(double a_ab, double a_ac, struct SeqracCertificate *out);

/**
 * Min-entropy certified by a determinant-witness value (0 to 1).
 */
enum SeqracStatus seqrac_hmin_w(double w, double *out);

/**
 * Min-entropy certified by a 2->1 witness value (2 to 2*sqrt(2)).
 */
enum SeqracStatus seqrac_hmin_t2(double t, double *out);

/**
 * Min-entropy estimate for a 3->1 witness value (6 to 4*sqrt(3)) against
 * rigidly rotated decoding triads. `budget` caps objective evaluations;
 * `seeds` (may be null when `n_seeds` is 0) makes the multi-start search
 * reproducible.
 *
 * # Safety
 * `seeds` must point to `n_seeds` readable values when non-null.
 */
enum SeqracStatus seqrac_hmin_t3(double t,
                                 uintptr_t budget,
                                 const uint64_t *seeds,
                                 uintptr_t n_seeds,
                                 double *out);

/**
 * Align a strategy with the coordinate-axis form and report the residuals.
 *
 * # Safety
 * `handle` must be a live strategy handle.
 */
enum SeqracStatus seqrac_canonicalize(const struct SeqracStrategy *handle,
                                      double tol,
                                      struct SeqracCanonReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEQRAC_H */
