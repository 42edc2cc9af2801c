#ifndef UXES_H
#define UXES_H

/* Generated by cbindgen from the uxes-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a fallible call. Anything other than `Ok` leaves a
// message readable through `uxes_last_error`.
typedef enum UxesStatus {
  // The call succeeded.
  UXES_STATUS_OK = 0,
  // A required pointer argument was null.
  UXES_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  UXES_STATUS_UTF8 = 2,
  // Reading or writing a file failed.
  UXES_STATUS_IO = 3,
  // The input was not well-formed XES.
  UXES_STATUS_PARSE = 4,
  // The input or a configuration value was rejected.
  UXES_STATUS_INVALID = 5,
  // The log is valid but the requested computation does not
  // support it (for example, exhaustive enumeration over a
  // continuous timestamp density).
  UXES_STATUS_UNSUPPORTED = 6,
} UxesStatus;

// Opaque handle to an event log (certain or uncertain).
typedef struct UxesLog UxesLog;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string; never free it.
const char *uxes_version(void);

// Message describing the most recent failure on the calling thread,
// or an empty string if nothing failed yet. The pointer stays valid
// until the next failing call on the same thread; never free it.
const char *uxes_last_error(void);

// Reads a log from `path` (`.xes` or `.xes.gz`) into a fresh handle.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be a valid
// pointer. On success `*out` owns the log.
enum UxesStatus uxes_log_read_file(const char *path, struct UxesLog **out);

// Parses a log from an in-memory XES document.
//
// # Safety
// `xml` must be a NUL-terminated string; `out` must be a valid
// pointer. On success `*out` owns the log.
enum UxesStatus uxes_log_read_string(const char *xml, struct UxesLog **out);

// Writes `log` to `path`; a `.gz` suffix selects gzip compression.
//
// # Safety
// `log` must be a live handle; `path` must be a NUL-terminated string.
enum UxesStatus uxes_log_write_file(const struct UxesLog *log, const char *path);

// Serializes `log` as an XES document into `*out`.
//
// # Safety
// `log` must be a live handle; `out` must be a valid pointer. Free
// the result with `uxes_string_free`.
enum UxesStatus uxes_log_to_string(const struct UxesLog *log, char **out);

// Releases a handle. Passing null is a no-op.
//
// # Safety
// `log` must be null or a handle not freed before.
void uxes_log_free(struct UxesLog *log);

// Releases a string returned by this library. Passing null is a no-op.
//
// # Safety
// `s` must be null or a string from this library not freed before.
void uxes_string_free(char *s);

// Number of traces in the log; 0 when `log` is null.
//
// # Safety
// `log` must be null or a live handle.
size_t uxes_log_trace_count(const struct UxesLog *log);

// Total number of events across all traces; 0 when `log` is null.
//
// # Safety
// `log` must be null or a live handle.
size_t uxes_log_event_count(const struct UxesLog *log);

// Checks the log and stores a JSON report of all violations in `*out`.
// The status is `Ok` even when violations are found; inspect the
// report's `violations` array.
//
// # Safety
// `log` must be a live handle; `out` must be a valid pointer. Free
// the result with `uxes_string_free`.
enum UxesStatus uxes_log_validate_json(const struct UxesLog *log, char **out);

// Summarizes how much uncertainty the log carries as JSON in `*out`.
//
// # Safety
// `log` must be a live handle; `out` must be a valid pointer. Free
// the result with `uxes_string_free`.
enum UxesStatus uxes_log_stats_json(const struct UxesLog *log, char **out);

// Enumerates every realization of every trace and stores the weighted
// listing as JSON in `*out`. `mode` selects how probability-free
// annotations are weighed: `"uniform"`, `"possibilistic"`, or null to
// require that the log carries explicit probabilities everywhere.
// `max_events` caps the per-trace event count (0 means the default).
//
// # Safety
// `log` must be a live handle; `mode` must be null or NUL-terminated;
// `out` must be a valid pointer. Free the result with
// `uxes_string_free`.
enum UxesStatus uxes_log_enumerate_json(const struct UxesLog *log,
                                        const char *mode,
                                        size_t max_events,
                                        char **out);

// Draws `n` realizations per trace and stores them as a new certain
// log in `*out`. Equal seeds give identical results. `mode` is as in
// `uxes_log_enumerate_json`.
//
// # Safety
// `log` must be a live handle; `mode` must be null or NUL-terminated;
// `out` must be a valid pointer. On success `*out` owns the sampled
// log; free it with `uxes_log_free`.
enum UxesStatus uxes_log_sample(const struct UxesLog *log,
                                uint64_t n,
                                uint64_t seed,
                                const char *mode,
                                struct UxesLog **out);

// Adds controlled uncertainty to a certain log and stores the result
// in `*out`. `config_json` holds an injection configuration object,
// e.g. `{"p_activity": 0.3, "k_labels": 2, "seed": 7}`; omitted
// fields keep their defaults and `null` selects the all-defaults
// identity configuration.
//
// # Safety
// `log` must be a live handle; `config_json` must be null or
// NUL-terminated; `out` must be a valid pointer. On success `*out`
// owns the new log; free it with `uxes_log_free`.
enum UxesStatus uxes_log_inject(const struct UxesLog *log,
                                const char *config_json,
                                struct UxesLog **out);

// Parses `xml`, serializes it again, re-parses, and reports in
// `*holds` whether both passes agree structurally.
//
// # Safety
// `xml` must be a NUL-terminated string; `holds` must be a valid
// pointer.
enum UxesStatus uxes_roundtrip_check(const char *xml, bool *holds);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* UXES_H */
