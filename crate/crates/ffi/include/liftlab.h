#ifndef LIFTLAB_H
#define LIFTLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum LiftlabCodeKind {
  /**
   * Qubits on the 2-cells of the 4-dimensional complex.
   */
  LIFTLAB_CODE_KIND_B = 0,
  /**
   * Code B plus the coarse-slice RP² cycle as a Z-stabilizer.
   */
  LIFTLAB_CODE_KIND_C = 1,
} LiftlabCodeKind;

/**
 * Result of every fallible call.
 */
typedef enum LiftlabStatus {
  LIFTLAB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  LIFTLAB_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  LIFTLAB_STATUS_INVALID_UTF8 = 2,
  /**
   * A parameter was out of range.
   */
  LIFTLAB_STATUS_INVALID_ARGUMENT = 3,
  /**
   * A JSON argument did not parse.
   */
  LIFTLAB_STATUS_PARSE = 4,
  /**
   * The input parsed but violates a structural invariant.
   */
  LIFTLAB_STATUS_INVALID_INPUT = 5,
  /**
   * The instance exceeds a size cap.
   */
  LIFTLAB_STATUS_CAP_EXCEEDED = 6,
  /**
   * The computation could not complete on a valid input.
   */
  LIFTLAB_STATUS_FAILED = 7,
  /**
   * An internal panic was caught.
   */
  LIFTLAB_STATUS_PANIC = 8,
} LiftlabStatus;

typedef enum LiftlabStrategy {
  /**
   * Closed-form correction; budget and seed are ignored.
   */
  LIFTLAB_STRATEGY_EXPLICIT = 0,
  LIFTLAB_STRATEGY_EXHAUSTIVE = 1,
  LIFTLAB_STRATEGY_GREEDY = 2,
  /**
   * Requires a seed.
   */
  LIFTLAB_STRATEGY_ANNEAL = 3,
} LiftlabStrategy;

/**
 * CSS code given by `dz` and `dq` over Z2.
 */
typedef struct LiftlabCode LiftlabCode;

/**
 * Exact chain complex over Z or Z2.
 */
typedef struct LiftlabComplex LiftlabComplex;

/**
 * CSS code with a site for every qubit.
 */
typedef struct LiftlabSited LiftlabSited;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *liftlab_version(void);

/**
 * Message of the last failed call on this thread, or null after a successful call.
 * The pointer stays valid until the next liftlab call on the same thread.
 */
const char *liftlab_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library that has not been freed.
 */
void liftlab_string_free(char *s);

/**
 * The quotient model of RP³ with polygon half-size `k >= 2`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum LiftlabStatus liftlab_complex_build_rp3(size_t k, struct LiftlabComplex **out);

/**
 * Telescope along the profile `ks[0..len]`, coarse end first.
 *
 * # Safety
 * `ks` must point to `len` readable values and `out` to storage for one handle.
 */
enum LiftlabStatus liftlab_complex_build_telescope(const size_t *ks,
                                                   size_t len,
                                                   struct LiftlabComplex **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` must point to storage for one handle.
 */
enum LiftlabStatus liftlab_complex_from_json(const char *json, struct LiftlabComplex **out);

/**
 * # Safety
 * `c` must be a live complex handle and `out` must point to storage for one string.
 */
enum LiftlabStatus liftlab_complex_to_json(const struct LiftlabComplex *c, char **out);

/**
 * Writes the Z2 Betti numbers, lowest degree first, into `betti[0..cap]` and their
 * count into `len`. Fails with `LIFTLAB_STATUS_INVALID_ARGUMENT` when `cap` is too small.
 *
 * # Safety
 * `c` must be a live handle, `betti` must have room for `cap` values and `len` must be valid.
 */
enum LiftlabStatus liftlab_complex_betti_z2(const struct LiftlabComplex *c,
                                            size_t *betti,
                                            size_t cap,
                                            size_t *len);

/**
 * Full homology report (Z2 and, for integer complexes, Z with torsion) as JSON.
 *
 * # Safety
 * `c` must be a live complex handle and `out` must point to storage for one string.
 */
enum LiftlabStatus liftlab_complex_homology_json(const struct LiftlabComplex *c, char **out);

/**
 * # Safety
 * `c` must be null or a handle from this library that has not been freed.
 */
void liftlab_complex_free(struct LiftlabComplex *c);

/**
 * Code B or C on `RP³(k) ⊗ I(n)`.
 *
 * # Safety
 * `out` must point to storage for one handle.
 */
enum LiftlabStatus liftlab_code_build_product(enum LiftlabCodeKind kind,
                                              size_t k,
                                              size_t n,
                                              struct LiftlabCode **out);

/**
 * Code B or C on the telescope along `ks[0..len]`.
 *
 * # Safety
 * `ks` must point to `len` readable values and `out` to storage for one handle.
 */
enum LiftlabStatus liftlab_code_build_telescope(enum LiftlabCodeKind kind,
                                                const size_t *ks,
                                                size_t len,
                                                struct LiftlabCode **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` must point to storage for one handle.
 */
enum LiftlabStatus liftlab_code_from_json(const char *json, struct LiftlabCode **out);

/**
 * # Safety
 * `code` must be a live handle and `out` must point to storage for one string.
 */
enum LiftlabStatus liftlab_code_to_json(const struct LiftlabCode *code, char **out);

/**
 * Stabilizer and qubit counts and the number of logical qubits. Any output may be null.
 *
 * # Safety
 * `code` must be a live handle; non-null outputs must be valid for writes.
 */
enum LiftlabStatus liftlab_code_params(const struct LiftlabCode *code,
                                       size_t *n_z,
                                       size_t *n_q,
                                       size_t *n_x,
                                       size_t *logical);

/**
 * Lifts the code to Z4 cellularly and corrects the lift. `verified` reports whether the
 * corrected lift squares to zero; `report`, when non-null, receives the JSON report.
 * `seed` is used only when `has_seed` is true.
 *
 * # Safety
 * `code` must be a live handle, `verified` must be valid for writes and `report` must be
 * null or point to storage for one string.
 */
enum LiftlabStatus liftlab_code_solve(const struct LiftlabCode *code,
                                      enum LiftlabStrategy strategy,
                                      uint64_t budget,
                                      uint64_t seed,
                                      bool has_seed,
                                      bool *verified,
                                      char **report);

/**
 * # Safety
 * `code` must be null or a handle from this library that has not been freed.
 */
void liftlab_code_free(struct LiftlabCode *code);

/**
 * Random sited code on a line of `sites` sites with `qubits_per_site` qubits each.
 *
 * # Safety
 * `out` must point to storage for one handle.
 */
enum LiftlabStatus liftlab_sited_random(size_t sites,
                                        size_t qubits_per_site,
                                        double density,
                                        uint64_t seed,
                                        struct LiftlabSited **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` must point to storage for one handle.
 */
enum LiftlabStatus liftlab_sited_from_json(const char *json, struct LiftlabSited **out);

/**
 * # Safety
 * `s` must be a live handle and `out` must point to storage for one string.
 */
enum LiftlabStatus liftlab_sited_to_json(const struct LiftlabSited *s, char **out);

/**
 * Disentangles, lifts locally to Z and verifies. A lift that cannot be built or fails
 * verification is reported through `passed` and the report, not through the status.
 *
 * # Safety
 * `s` must be a live handle, `passed` must be valid for writes and `report` must be null
 * or point to storage for one string.
 */
enum LiftlabStatus liftlab_sited_local_lift(const struct LiftlabSited *s,
                                            bool *passed,
                                            char **report);

/**
 * # Safety
 * `s` must be null or a handle from this library that has not been freed.
 */
void liftlab_sited_free(struct LiftlabSited *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIFTLAB_H */
