#ifndef COHOMOLAB_H
#define COHOMOLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CohoStatus {
  COHO_STATUS_OK = 0,
  COHO_STATUS_NULL_POINTER = 1,
  COHO_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or inconsistent input: JSON, tables, names, fields.
   */
  COHO_STATUS_INVALID_INPUT = 3,
  /**
   * A map would exceed the memory cap.
   */
  COHO_STATUS_MEMORY_CAP = 4,
  /**
   * A mathematical check failed.
   */
  COHO_STATUS_VERDICT_FAILED = 5,
  /**
   * An output buffer is shorter than required.
   */
  COHO_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * A panic was caught at the boundary.
   */
  COHO_STATUS_PANIC = 7,
} CohoStatus;

/**
 * Opaque action of a group on a finite set.
 */
typedef struct CohoAction CohoAction;

/**
 * Opaque finite group.
 */
typedef struct CohoGroup CohoGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a
 * successful one. Valid until the next call on this thread.
 */
const char *coho_last_error(void);

/**
 * Library version as a static string.
 */
const char *coho_version(void);

/**
 * Parses a group file (Cayley table or permutation generators).
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum CohoStatus coho_group_from_json(const char *json, struct CohoGroup **out);

/**
 * Looks up a group of the bundled corpus by name.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum CohoStatus coho_group_from_corpus(const char *name, struct CohoGroup **out);

/**
 * Releases a group. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void coho_group_free(struct CohoGroup *g);

/**
 * # Safety
 * `g` and `out` must be valid pointers.
 */
enum CohoStatus coho_group_order(const struct CohoGroup *g, size_t *out);

/**
 * # Safety
 * `g` and `out` must be valid pointers.
 */
enum CohoStatus coho_group_class_count(const struct CohoGroup *g, size_t *out);

/**
 * Whether every non-identity element has an abelian centralizer.
 *
 * # Safety
 * `g` and `out` must be valid pointers.
 */
enum CohoStatus coho_group_is_ct(const struct CohoGroup *g, bool *out);

/**
 * Parses an action file for `g`.
 *
 * # Safety
 * `g` and `out` must be valid pointers and `json` a nul-terminated string.
 */
enum CohoStatus coho_action_from_json(const struct CohoGroup *g,
                                      const char *json,
                                      struct CohoAction **out);

/**
 * Conjugation action of `g` on its non-identity elements.
 *
 * # Safety
 * `g` and `out` must be valid pointers.
 */
enum CohoStatus coho_action_conjugation(const struct CohoGroup *g, struct CohoAction **out);

/**
 * Releases an action. Null is ignored.
 *
 * # Safety
 * `a` must come from this library and not be used afterwards.
 */
void coho_action_free(struct CohoAction *a);

/**
 * # Safety
 * `a` and `out` must be valid pointers.
 */
enum CohoStatus coho_action_set_size(const struct CohoAction *a, size_t *out);

/**
 * Dimensions of `H^n(k[G], k(S)')` for `0 <= n <= max_degree` over `Q`
 * (`characteristic` 0) or `F_p`, by brute force into `oracle` and through
 * the stabilizers into `fast_path`. Both buffers need `max_degree + 1`
 * entries. Returns `VerdictFailed` when the two disagree.
 *
 * # Safety
 * `a` must be valid; `oracle` and `fast_path` must point to `len` writable
 * entries.
 */
enum CohoStatus coho_disintegrate(const struct CohoAction *a,
                                  uint64_t characteristic,
                                  size_t max_degree,
                                  size_t *oracle,
                                  size_t *fast_path,
                                  size_t len);

/**
 * Runs a command line of the `cohomolab` binary (without the program name)
 * and returns its JSON report envelope in `json_out`. The report is also
 * returned when the verdict fails, with status `VerdictFailed`.
 *
 * # Safety
 * `command_line` must be a nul-terminated string and `json_out` a valid
 * pointer.
 */
enum CohoStatus coho_run(const char *command_line, char **json_out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void coho_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COHOMOLAB_H */
