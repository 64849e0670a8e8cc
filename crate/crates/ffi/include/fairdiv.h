#ifndef FAIRDIV_H
#define FAIRDIV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  FD_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  FD_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  FD_STATUS_INVALID_UTF8 = 2,
  FD_STATUS_PARSE = 3,
  FD_STATUS_INPUT = 4,
  FD_STATUS_CAPABILITY = 5,
  FD_STATUS_INFEASIBLE = 6,
  /**
   * The instance lies in a setting where a fair allocation may not exist.
   */
  FD_STATUS_IMPOSSIBLE = 7,
  FD_STATUS_NOT_BASE_ORDERABLE = 8,
  FD_STATUS_INVARIANT = 9,
  FD_STATUS_INTERNAL = 10,
  /**
   * A Rust panic was caught at the boundary.
   */
  FD_STATUS_PANIC = 11,
} FdStatus;

/**
 * Opaque allocation handle.
 */
typedef struct FdAllocation FdAllocation;

/**
 * Opaque instance handle.
 */
typedef struct FdInstance FdInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *fd_last_error(void);

/**
 * Library version as a static string.
 */
const char *fd_version(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void fd_string_free(char *s);

/**
 * Parses a `fairdiv-instance/1` JSON document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
FdStatus fd_instance_from_json(const char *json, FdInstance **out);

/**
 * Frees an instance. Null is ignored.
 *
 * # Safety
 * `inst` must come from [`fd_instance_from_json`] and not be freed twice.
 */
void fd_instance_free(FdInstance *inst);

/**
 * Number of agents, or 0 for null.
 *
 * # Safety
 * `inst` must be null or a live instance handle.
 */
size_t fd_instance_num_agents(const FdInstance *inst);

/**
 * Number of items, or 0 for null.
 *
 * # Safety
 * `inst` must be null or a live instance handle.
 */
size_t fd_instance_num_items(const FdInstance *inst);

/**
 * Computes an allocation. `algorithm` may be null to pick one automatically;
 * otherwise it names an algorithm as the CLI's `--algorithm` does.
 * With `verify` set, mid-run invariants are checked.
 *
 * # Safety
 * `inst` must be a live instance handle, `algorithm` null or nul-terminated,
 * and `out` writable.
 */
FdStatus fd_solve(const FdInstance *inst, const char *algorithm, bool verify, FdAllocation **out);

/**
 * Parses an allocation: a JSON list of bundles, one list of item ids per agent.
 *
 * # Safety
 * `json` must be nul-terminated and `out` writable.
 */
FdStatus fd_allocation_from_json(const char *json, FdAllocation **out);

/**
 * Frees an allocation. Null is ignored.
 *
 * # Safety
 * `x` must come from this library and not be freed twice.
 */
void fd_allocation_free(FdAllocation *x);

/**
 * Writes the allocation as JSON into `*out`; free it with [`fd_string_free`].
 *
 * # Safety
 * `x` must be a live allocation handle and `out` writable.
 */
FdStatus fd_allocation_to_json(const FdAllocation *x, char **out);

/**
 * Copies the items of `agent`'s bundle into `buf`. `*len` holds the
 * capacity of `buf` on entry and the bundle size on return. A null `buf`
 * only queries the size. A short buffer is an input error.
 *
 * # Safety
 * `x` must be a live allocation handle, `len` writable, and `buf` null or
 * valid for `*len` writes.
 */
FdStatus fd_allocation_bundle(const FdAllocation *x, size_t agent, size_t *buf, size_t *len);

/**
 * Decides whether the allocation is feasible and satisfies `notion`
 * (`f-ef1`, `ef1`, `efx` or `weak-f-ef1`). An infeasible allocation yields
 * `false` rather than an error.
 *
 * # Safety
 * Handles must be live, `notion` nul-terminated and `out` writable.
 */
FdStatus fd_verify(const FdInstance *inst, const FdAllocation *x, const char *notion, bool *out);

/**
 * Full fairness report as JSON in `*out`; free it with [`fd_string_free`].
 * With `pareto` set, also decides Pareto efficiency by enumeration.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
FdStatus fd_fairness_report(const FdInstance *inst, const FdAllocation *x, bool pareto, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FAIRDIV_H */
