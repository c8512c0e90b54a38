#ifndef CATACHC_H
#define CATACHC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Clause set selector.
 */
typedef enum CataChcMode {
  /**
   * The source program with coverage predicates.
   */
  CATA_CHC_MODE_SRC = 0,
  /**
   * Transformed clauses paired with their erasures.
   */
  CATA_CHC_MODE_WWO = 1,
  /**
   * Transformed clauses over ADT-carrying predicates.
   */
  CATA_CHC_MODE_W = 2,
  /**
   * ADT-free overapproximation.
   */
  CATA_CHC_MODE_WO = 3,
} CataChcMode;

/**
 * Status codes. Zero is success; the others name the failing stage.
 */
typedef enum CataChcStatus {
  CATA_CHC_STATUS_OK = 0,
  CATA_CHC_STATUS_NULL_ARGUMENT = 1,
  CATA_CHC_STATUS_INVALID_UTF8 = 2,
  CATA_CHC_STATUS_SYNTAX = 3,
  CATA_CHC_STATUS_SORT = 4,
  CATA_CHC_STATUS_QUERY = 5,
  CATA_CHC_STATUS_SCHEMA = 6,
  CATA_CHC_STATUS_NOT_FUNCTIONAL = 7,
  CATA_CHC_STATUS_ABSTRACTION = 8,
  CATA_CHC_STATUS_INTERNAL = 9,
  CATA_CHC_STATUS_CONFIG = 10,
  CATA_CHC_STATUS_BUDGET = 11,
  CATA_CHC_STATUS_IO = 12,
  CATA_CHC_STATUS_PANIC = 13,
} CataChcStatus;

/**
 * Opaque transformation result.
 */
typedef struct CataChcOutput CataChcOutput;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Transforms the program in the nul-terminated `source`. On success stores a
 * new handle in `*out`; on failure leaves `*out` null.
 *
 * # Safety
 * `source` must be null or a valid nul-terminated string, and `out` must be
 * null or valid for writing one pointer.
 */
enum CataChcStatus cata_chc_transform(const char *source,
                                      bool readable_names,
                                      struct CataChcOutput **out);

/**
 * Stores the SMT-LIB HORN script of one clause set in `*out`.
 *
 * # Safety
 * `h` must be null or a live handle; `out` must be null or valid for writing.
 */
enum CataChcStatus cata_chc_output_smtlib(const struct CataChcOutput *h,
                                          enum CataChcMode mode,
                                          char **out);

/**
 * Stores one clause set in the surface syntax in `*out`.
 *
 * # Safety
 * As for [`cata_chc_output_smtlib`].
 */
enum CataChcStatus cata_chc_output_chc(const struct CataChcOutput *h,
                                       enum CataChcMode mode,
                                       char **out);

/**
 * Number of new-predicate definitions, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t cata_chc_output_definition_count(const struct CataChcOutput *h);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void cata_chc_output_free(struct CataChcOutput *h);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void cata_chc_string_free(char *s);

/**
 * Message of the last call on this thread; empty after a success. Valid until
 * the next call on the same thread.
 */
const char *cata_chc_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *cata_chc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CATACHC_H */
