#ifndef ZONECAST_H
#define ZONECAST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum zc_field {
  // Smallest field with a point for every zone.
  ZC_FIELD_AUTO = 0,
  ZC_FIELD_GF8 = 8,
  ZC_FIELD_GF16 = 16,
} zc_field;

typedef enum zc_order {
  ZC_ORDER_EDGE_ORDER = 0,
  ZC_ORDER_UNCOLORED_FIRST = 1,
} zc_order;

typedef enum zc_status {
  ZC_STATUS_OK = 0,
  ZC_STATUS_NULL_POINTER = 1,
  ZC_STATUS_INVALID_UTF8 = 2,
  ZC_STATUS_PARSE = 3,
  ZC_STATUS_INVALID_GRAPH = 4,
  ZC_STATUS_INVALID_SESSION = 5,
  ZC_STATUS_OUT_OF_RANGE = 6,
  ZC_STATUS_INVARIANT_VIOLATION = 7,
  ZC_STATUS_NO_FEASIBLE_CODE = 8,
  ZC_STATUS_FIELD_TOO_SMALL = 9,
  ZC_STATUS_UNDECODABLE = 10,
  ZC_STATUS_PANIC = 99,
} zc_status;

// A directed multigraph, optionally with a stored session.
typedef struct zc_graph zc_graph;

// The outcome of one online construction.
typedef struct zc_result zc_result;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static nul-terminated string.
const char *zc_version(void);

// Message for the last failure on this thread, or null if none. Valid
// until the next failing call on the same thread.
const char *zc_last_error_message(void);

// Static description of a status code.
const char *zc_status_name(enum zc_status status);

// Builds a graph from parallel `tails`/`heads` arrays of length
// `arc_count`. Arc `i` gets edge id `i`.
//
// # Safety
// `tails` and `heads` must point to `arc_count` readable values and `out`
// must be writable.
enum zc_status zc_graph_new(size_t node_count,
                            const size_t *tails,
                            const size_t *heads,
                            size_t arc_count,
                            struct zc_graph **out);

// Parses the graph JSON format (`n`, `arcs`, optional `source` and
// `receivers`).
//
// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum zc_status zc_graph_from_json(const char *json, struct zc_graph **out);

// Loads a built-in example graph with its session: "fig1", "fig4" or
// "fig5".
//
// # Safety
// `name` must be a nul-terminated string and `out` writable.
enum zc_status zc_graph_fixture(const char *name, struct zc_graph **out);

// Serializes the graph and any stored session as JSON.
//
// # Safety
// `graph` must be a live handle and `out` writable.
enum zc_status zc_graph_to_json(const struct zc_graph *graph, char **out);

// # Safety
// `graph` must be null or a live handle.
size_t zc_graph_node_count(const struct zc_graph *graph);

// # Safety
// `graph` must be null or a live handle.
size_t zc_graph_edge_count(const struct zc_graph *graph);

// # Safety
// `graph` must be null or a handle from this library, not used afterwards.
void zc_graph_free(struct zc_graph *graph);

// Runs the online construction for `receivers` in the given order.
//
// # Safety
// `graph` must be a live handle, `receivers` must point to
// `receiver_count` values and `out` must be writable.
enum zc_status zc_construct(const struct zc_graph *graph,
                            size_t source,
                            const size_t *receivers,
                            size_t receiver_count,
                            enum zc_order order,
                            struct zc_result **out);

// Runs the online construction on the session stored with the graph.
//
// # Safety
// `graph` must be a live handle and `out` writable.
enum zc_status zc_construct_session(const struct zc_graph *graph,
                                    enum zc_order order,
                                    struct zc_result **out);

// Group throughput `K = min k_i`; 0 for a null handle.
//
// # Safety
// `result` must be null or a live handle.
size_t zc_result_group_k(const struct zc_result *result);

// # Safety
// `result` must be null or a live handle.
size_t zc_result_zone_count(const struct zc_result *result);

// # Safety
// `result` must be null or a live handle.
size_t zc_result_receiver_count(const struct zc_result *result);

// Path count `k_i` of the receiver at position `index`.
//
// # Safety
// `result` must be a live handle and `out_k` writable.
enum zc_status zc_result_receiver_k(const struct zc_result *result, size_t index, size_t *out_k);

// Serializes the result (zone labels and per-receiver paths) as JSON.
//
// # Safety
// `result` must be a live handle and `out` writable.
enum zc_status zc_result_to_json(const struct zc_result *result, char **out);

// Parses a result produced by [`zc_result_to_json`] or the CLI.
//
// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum zc_status zc_result_from_json(const char *json, struct zc_result **out);

// Checks the structural invariants, that every receiver's zones have full
// rank, and that `blocks` random symbol blocks decode exactly.
//
// # Safety
// `graph` and `result` must be live handles describing the same graph.
enum zc_status zc_verify(const struct zc_graph *graph,
                         const struct zc_result *result,
                         enum zc_field field,
                         uint64_t seed,
                         size_t blocks);

// # Safety
// `result` must be null or a handle from this library, not used afterwards.
void zc_result_free(struct zc_result *result);

// # Safety
// `s` must be null or a string returned by this library, not used
// afterwards.
void zc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZONECAST_H */
