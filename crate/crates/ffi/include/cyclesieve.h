/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef CYCLESIEVE_H
#define CYCLESIEVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call.
typedef enum CsStatus {
  CS_STATUS_OK = 0,
  // A required pointer argument was NULL.
  CS_STATUS_NULL_ARGUMENT = 1,
  // An argument broke the operation's contract (vertex out of range, `ℓ = 0`, ...).
  CS_STATUS_INVALID_ARGUMENT = 2,
  CS_STATUS_PARSE_ERROR = 3,
  CS_STATUS_IO_ERROR = 4,
  // An internal exactness check failed.
  CS_STATUS_CONSISTENCY_ERROR = 5,
  // The requested value does not fit the output type.
  CS_STATUS_OVERFLOW = 6,
  // The library panicked; the handle arguments are left untouched.
  CS_STATUS_PANIC = 7,
} CsStatus;

// Graph file formats accepted by [`cs_graph_load`].
typedef enum CsFormat {
  // `u v [w]` per line, `#` comments.
  CS_FORMAT_EDGE_LIST = 0,
  // KONECT `out.*` files, `%` comments.
  CS_FORMAT_KONECT = 1,
} CsFormat;

// Opaque per-length count vector.
typedef struct CsCounts CsCounts;

// Opaque graph handle.
typedef struct CsGraph CsGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a graph on vertices `0..n` from `n_edges` edges `sources[e] → targets[e]`.
// `weights` may be NULL for unit weights. Undirected graphs take each edge once; a repeated
// pair keeps its first weight.
//
// # Safety
// `sources` and `targets` (and `weights` unless NULL) must point to `n_edges` readable
// elements; `out` must be writable.
enum CsStatus cs_graph_from_edges(size_t n,
                                  bool directed,
                                  const size_t *sources,
                                  const size_t *targets,
                                  const double *weights,
                                  size_t n_edges,
                                  struct CsGraph **out);

// Loads a graph file. With `weighted` false every edge weight is replaced by 1.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum CsStatus cs_graph_load(const char *path,
                            enum CsFormat format,
                            bool directed,
                            bool weighted,
                            struct CsGraph **out);

// Releases a graph. NULL is ignored.
//
// # Safety
// `g` must be NULL or a handle from this library that has not been freed.
void cs_graph_free(struct CsGraph *g);

// Number of vertices, 0 for NULL.
//
// # Safety
// `g` must be NULL or a live graph handle.
size_t cs_graph_vertex_count(const struct CsGraph *g);

// Number of stored edges (undirected edges once, self-loops included), 0 for NULL.
//
// # Safety
// `g` must be NULL or a live graph handle.
size_t cs_graph_edge_count(const struct CsGraph *g);

// Simple cycles of every length `1..=ell`. Weighted graphs yield sums of cycle weights.
//
// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum CsStatus cs_count_cycles(const struct CsGraph *g, size_t ell, struct CsCounts **out);

// Simple cycles through `root`, counted once per cycle, for lengths `1..=ell`.
//
// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum CsStatus cs_count_cycles_through(const struct CsGraph *g,
                                      size_t root,
                                      size_t ell,
                                      struct CsCounts **out);

// Simple paths from `from` to `to` (distinct vertices) of lengths `1..=ell`.
//
// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum CsStatus cs_count_paths(const struct CsGraph *g,
                             size_t from,
                             size_t to,
                             size_t ell,
                             struct CsCounts **out);

// Largest length held (`ell`), 0 for NULL.
//
// # Safety
// `c` must be NULL or a live counts handle.
size_t cs_counts_len(const struct CsCounts *c);

// True when the counts are exact integers (integer-weighted input).
//
// # Safety
// `c` must be NULL or a live counts handle.
bool cs_counts_is_exact(const struct CsCounts *c);

// Exact count of length `k` as a 64-bit integer. `OVERFLOW` when it does not fit,
// `INVALID_ARGUMENT` for approximate counts.
//
// # Safety
// `c` must be a live counts handle; `out` must be writable.
enum CsStatus cs_counts_get_i64(const struct CsCounts *c, size_t k, int64_t *out);

// Count of length `k` as a double (rounded for large exact counts).
//
// # Safety
// `c` must be a live counts handle; `out` must be writable.
enum CsStatus cs_counts_get_f64(const struct CsCounts *c, size_t k, double *out);

// Count of length `k` as a newly allocated decimal string, released with
// [`cs_string_free`]. NULL on error.
//
// # Safety
// `c` must be a live counts handle.
char *cs_counts_get_string(const struct CsCounts *c, size_t k);

// Releases a counts handle. NULL is ignored.
//
// # Safety
// `c` must be NULL or a handle from this library that has not been freed.
void cs_counts_free(struct CsCounts *c);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a string from this library that has not been freed.
void cs_string_free(char *s);

// Message for the most recent failure on this thread, or NULL. Valid until the next
// failing call on the same thread.
const char *cs_last_error(void);

// Library version as a static string.
const char *cs_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLESIEVE_H */
