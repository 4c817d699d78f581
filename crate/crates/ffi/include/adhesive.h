#ifndef ADHESIVE_H
#define ADHESIVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. The first three match the exit codes of the command line tool.
typedef enum AdhStatus {
  ADH_STATUS_OK = 0,
  // The question was well posed and the answer is no: no applicable match, a law failed.
  ADH_STATUS_NEGATIVE = 1,
  // Malformed JSON, unknown names, or data that is not well formed.
  ADH_STATUS_INVALID_INPUT = 2,
  ADH_STATUS_NULL_POINTER = 3,
  // A panic was caught at the boundary.
  ADH_STATUS_INTERNAL = 4,
} AdhStatus;

typedef struct AdhDerivation AdhDerivation;

// A multigraph together with the ids of its vertices and edges.
typedef struct AdhGraph AdhGraph;

typedef struct AdhRule AdhRule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the next call.
const char *adh_last_error(void);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void adh_string_free(char *s);

// Parses `{"nodes": [...], "edges": [{"id", "src", "tgt"}, ...]}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` valid for writing.
enum AdhStatus adh_graph_parse(const char *json, struct AdhGraph **out);

// # Safety
// `g` must be a live graph handle and the output pointers valid for writing.
enum AdhStatus adh_graph_counts(const struct AdhGraph *g, size_t *vertices, size_t *edges);

// Writes the graph as JSON; free the string with [`adh_string_free`].
//
// # Safety
// `g` must be a live graph handle and `out` valid for writing.
enum AdhStatus adh_graph_to_json(const struct AdhGraph *g, char **out);

// # Safety
// `g` must be null or a handle from this library that was not yet freed.
void adh_graph_free(struct AdhGraph *g);

// Parses a rule with `left`, `interface`, `right`, `l`, `r` and `linear`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` valid for writing.
enum AdhStatus adh_rule_parse(const char *json, struct AdhRule **out);

// # Safety
// `r` must be null or a handle from this library that was not yet freed.
void adh_rule_free(struct AdhRule *r);

// Applies the rule at its first match satisfying the gluing conditions.
// Returns [`AdhStatus::Negative`] when there is none.
//
// # Safety
// `rule` and `host` must be live handles and `out` valid for writing.
enum AdhStatus adh_apply(const struct AdhRule *rule,
                         const struct AdhGraph *host,
                         struct AdhDerivation **out);

// The rewritten graph `Z`, as a new handle.
//
// # Safety
// `d` must be a live derivation handle and `out` valid for writing.
enum AdhStatus adh_derivation_result(const struct AdhDerivation *d, struct AdhGraph **out);

// # Safety
// `d` must be a live derivation handle and `out` valid for writing.
enum AdhStatus adh_derivation_to_json(const struct AdhDerivation *d, char **out);

// Graphviz rendering of the host, context and result.
//
// # Safety
// `d` must be a live derivation handle and `out` valid for writing.
enum AdhStatus adh_derivation_to_dot(const struct AdhDerivation *d, char **out);

// # Safety
// `d` must be null or a handle from this library that was not yet freed.
void adh_derivation_free(struct AdhDerivation *d);

// Runs one law for `iters` seeded iterations on `finset`, `multigraph` or
// `simplegraph`. Writes the number of failing iterations to `failed` and
// returns [`AdhStatus::Negative`] if it is non-zero.
//
// # Safety
// `category` and `law` must be NUL-terminated strings and `failed` valid for writing.
enum AdhStatus adh_check_law(const char *category,
                             const char *law,
                             uint64_t seed,
                             size_t iters,
                             size_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADHESIVE_H */
