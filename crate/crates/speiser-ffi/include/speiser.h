#ifndef SPEISER_H
#define SPEISER_H

/* Generated by cbindgen from speiser-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes: `Ok` for success, `Verdict` when the analysis ran but the
 * answer is negative (infeasible, violated, inconsistent), and the rest for
 * contract failures.
 */
typedef enum {
  SpeiserStatus_Ok = 0,
  SpeiserStatus_Verdict = 1,
  SpeiserStatus_InvalidInput = 2,
  SpeiserStatus_NullPointer = 3,
  SpeiserStatus_InternalPanic = 4,
} SpeiserStatus;

/**
 * Opaque graph handle.
 */
typedef struct SpeiserGraph SpeiserGraph;

/**
 * Library version as a static string; do not free.
 */
const char *speiser_version(void);

/**
 * Message for the most recent failure on this thread; valid until the next
 * failing call. Do not free.
 */
const char *speiser_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed before.
 */
void speiser_string_free(char *s);

/**
 * Parses a graph from its JSON description. Returns null on error (consult
 * `speiser_last_error`).
 *
 * # Safety
 * `json` must point to a NUL-terminated UTF-8 string.
 */
SpeiserGraph *speiser_graph_parse(const char *json);

/**
 * Frees a graph handle.
 *
 * # Safety
 * `g` must come from `speiser_graph_parse` and not have been freed before.
 */
void speiser_graph_free(SpeiserGraph *g);

/**
 * Serializes the graph back to JSON (caller frees via `speiser_string_free`).
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
SpeiserStatus speiser_graph_to_json(const SpeiserGraph *g, char **out);

/**
 * Admissible index range. `q_max` is set to -1 when infinite.
 *
 * # Safety
 * All pointers must be valid.
 */
SpeiserStatus speiser_q_bounds(const SpeiserGraph *g, uint32_t *q_min, int64_t *q_max);

/**
 * Solves the extension problem at index `q`. Writes the plan (or witness)
 * report as JSON; returns `Verdict` when infeasible.
 *
 * # Safety
 * All pointers must be valid.
 */
SpeiserStatus speiser_extend(const SpeiserGraph *g, uint32_t q, char **out);

/**
 * Constructs the forced labelling at index `q` from seed dart 0 and writes
 * it as JSON; `Verdict` when the minimality condition fails and the descent
 * had to reduce the index.
 *
 * # Safety
 * All pointers must be valid.
 */
SpeiserStatus speiser_label(const SpeiserGraph *g, uint32_t q, char **out);

/**
 * Verifies a labelling (JSON) against the graph; `Verdict` on violations.
 *
 * # Safety
 * All pointers must be valid.
 */
SpeiserStatus speiser_verify_labelling(const SpeiserGraph *g, const char *labels_json, char **out);

/**
 * Full decomposition report (nucleus, ends, divisor, tags) as JSON. Pass a
 * labelling as JSON or null to classify without labels.
 *
 * # Safety
 * All pointers must be valid; `labels_json` may be null.
 */
SpeiserStatus speiser_decompose(const SpeiserGraph *g, const char *labels_json, char **out);

/**
 * Runs the three balance checks; `Verdict` when any is violated.
 *
 * # Safety
 * All pointers must be valid.
 */
SpeiserStatus speiser_balance(const SpeiserGraph *g,
                              uintptr_t max_cycle,
                              uintptr_t max_subgraph,
                              char **out);

#endif  /* SPEISER_H */
