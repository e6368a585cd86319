#ifndef MISLAB_H
#define MISLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum MislabStatus {
  MISLAB_STATUS_OK = 0,
  MISLAB_STATUS_INVALID_ARGUMENT = 1,
  MISLAB_STATUS_PARSE_ERROR = 2,
  MISLAB_STATUS_CAP_EXCEEDED = 3,
  MISLAB_STATUS_POLICY_MISMATCH = 4,
  MISLAB_STATUS_CONSTRUCTION_FAILED = 5,
  MISLAB_STATUS_VERIFICATION_FAILED = 6,
  MISLAB_STATUS_IO_ERROR = 7,
  MISLAB_STATUS_NULL_POINTER = 8,
  MISLAB_STATUS_PANIC = 9,
} MislabStatus;

// Oracle answering rule for [`mislab_run_scheme`].
typedef enum MislabPolicy {
  // Greedy in increasing vertex order.
  MISLAB_POLICY_GREEDY_LEX = 0,
  // Greedy in decreasing vertex order.
  MISLAB_POLICY_GREEDY_REVERSE = 1,
  // Greedy in a random order derived from the seed and query index.
  MISLAB_POLICY_RANDOM = 2,
} MislabPolicy;

// Hidden graph.
typedef struct MislabGraph MislabGraph;

// Non-adaptive query scheme.
typedef struct MislabScheme MislabScheme;

// Ordered query/answer record.
typedef struct MislabTranscript MislabTranscript;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next call on this thread.
const char *mislab_last_error_message(void);

// Library version as a static string.
const char *mislab_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void mislab_string_free(char *s);

// Parses the graph text format (`n m` header, then `u v` lines).
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum MislabStatus mislab_graph_parse(const char *text, struct MislabGraph **out);

// Random graph with maximum degree at most `delta`.
//
// # Safety
// `out` must be writable.
enum MislabStatus mislab_graph_generate(size_t n,
                                        size_t delta,
                                        double density,
                                        uint64_t seed,
                                        struct MislabGraph **out);

// # Safety
// `g` must be a live graph handle.
size_t mislab_graph_vertex_count(const struct MislabGraph *g);

// # Safety
// `g` must be a live graph handle.
size_t mislab_graph_edge_count(const struct MislabGraph *g);

// # Safety
// `g` must be a live graph handle.
size_t mislab_graph_max_degree(const struct MislabGraph *g);

// False for out-of-range vertices.
//
// # Safety
// `g` must be a live graph handle.
bool mislab_graph_has_edge(const struct MislabGraph *g, size_t u, size_t v);

// # Safety
// `a` and `b` must be live graph handles.
bool mislab_graph_equal(const struct MislabGraph *a, const struct MislabGraph *b);

// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum MislabStatus mislab_graph_to_text(const struct MislabGraph *g, char **out);

// # Safety
// `g` must come from this library and not be freed twice. NULL is ignored.
void mislab_graph_free(struct MislabGraph *g);

// `ceil(c Δ² ln n)` random queries with inclusion probability `p`.
//
// # Safety
// `out` must be writable.
enum MislabStatus mislab_scheme_randomized(size_t n,
                                           size_t delta,
                                           double c,
                                           double p,
                                           uint64_t seed,
                                           struct MislabScheme **out);

// Deterministic scheme dualized from a random cover-free family with
// oversampling constant `c`; verified when the check fits the default caps.
// `verified` may be NULL.
//
// # Safety
// `out` must be writable; `verified` must be NULL or writable.
enum MislabStatus mislab_scheme_cff(size_t n,
                                    size_t delta,
                                    double c,
                                    uint64_t seed,
                                    struct MislabScheme **out,
                                    bool *verified);

// Parses the scheme text format (`n t` header, then one query per line).
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum MislabStatus mislab_scheme_parse(const char *text, struct MislabScheme **out);

// # Safety
// `s` must be a live scheme handle; `out` must be writable.
enum MislabStatus mislab_scheme_to_text(const struct MislabScheme *s, char **out);

// # Safety
// `s` must be a live scheme handle.
size_t mislab_scheme_query_count(const struct MislabScheme *s);

// # Safety
// `s` must come from this library and not be freed twice. NULL is ignored.
void mislab_scheme_free(struct MislabScheme *s);

// Runs every query of `s` against `g` under `policy`. `seed` is used by
// the random policy only.
//
// # Safety
// `g` and `s` must be live handles; `out` must be writable.
enum MislabStatus mislab_run_scheme(const struct MislabGraph *g,
                                    const struct MislabScheme *s,
                                    enum MislabPolicy policy,
                                    uint64_t seed,
                                    struct MislabTranscript **out);

// # Safety
// `t` must be a live transcript handle; `out` must be writable.
enum MislabStatus mislab_transcript_to_jsonl(const struct MislabTranscript *t, char **out);

// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum MislabStatus mislab_transcript_parse_jsonl(const char *text, struct MislabTranscript **out);

// # Safety
// `t` must be a live transcript handle.
size_t mislab_transcript_len(const struct MislabTranscript *t);

// # Safety
// `t` must come from this library and not be freed twice. NULL is ignored.
void mislab_transcript_free(struct MislabTranscript *t);

// Decodes `t` into a graph with undecided pairs read as non-edges and
// stores the number of undecided pairs in `unknown_pairs` (may be NULL).
//
// # Safety
// `t` must be a live transcript handle; `out` must be writable;
// `unknown_pairs` must be NULL or writable.
enum MislabStatus mislab_decode(const struct MislabTranscript *t,
                                struct MislabGraph **out,
                                size_t *unknown_pairs);

// Runs an experiment described by a JSON object such as
// `{"experiment":"family-count","n":9,"delta":2}` and returns the report as
// JSON. `passed` (may be NULL) receives whether every bound check held.
//
// # Safety
// `request` must be a nul-terminated string; `report` must be writable;
// `passed` must be NULL or writable.
enum MislabStatus mislab_experiment_json(const char *request, char **report, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MISLAB_H */
