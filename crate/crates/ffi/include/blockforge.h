#ifndef BLOCKFORGE_H
#define BLOCKFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BfStatus {
  BF_STATUS_OK = 0,
  /**
   * A suite or certificate ran and some check failed.
   */
  BF_STATUS_CHECK_FAILED = 1,
  BF_STATUS_BAD_PARAMS = 2,
  BF_STATUS_SCHEMA_ERROR = 3,
  BF_STATUS_CAP_EXCEEDED = 4,
  /**
   * Any other mathematical precondition failure.
   */
  BF_STATUS_MATH_ERROR = 5,
  BF_STATUS_NULL_POINTER = 6,
  BF_STATUS_INVALID_UTF8 = 7,
  BF_STATUS_OUT_OF_RANGE = 8,
  BF_STATUS_PANIC = 9,
} BfStatus;

typedef struct BfField BfField;

typedef struct BfGroup BfGroup;

typedef struct BfMatrix BfMatrix;

typedef struct BfReport BfReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread; empty after a
 * successful call. Valid until the next call on the same thread.
 */
const char *bf_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *bf_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void bf_string_free(char *s);

/**
 * Sets the process-wide matrix dimension cap.
 */
void bf_set_max_dim(size_t n);

/**
 * GF(p^m).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BfStatus bf_field_new(uint32_t p, uint32_t m, struct BfField **out_field);

/**
 * # Safety
 * `f` must be null or a live field handle.
 */
void bf_field_free(struct BfField *f);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live field handle.
 */
uint32_t bf_field_order(const struct BfField *f);

/**
 * Characteristic, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live field handle.
 */
uint32_t bf_field_characteristic(const struct BfField *f);

/**
 * # Safety
 * `f` must be a live field handle and `res` a valid pointer.
 */
enum BfStatus bf_field_add(const struct BfField *f, uint32_t a, uint32_t b, uint32_t *res);

/**
 * # Safety
 * `f` must be a live field handle and `res` a valid pointer.
 */
enum BfStatus bf_field_mul(const struct BfField *f, uint32_t a, uint32_t b, uint32_t *res);

/**
 * Multiplicative inverse; `BF_STATUS_BAD_PARAMS` for zero.
 *
 * # Safety
 * `f` must be a live field handle and `res` a valid pointer.
 */
enum BfStatus bf_field_inv(const struct BfField *f, uint32_t a, uint32_t *res);

/**
 * A catalog group by id, e.g. `"S3"`.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out_group` a valid pointer.
 */
enum BfStatus bf_group_named(const char *id, struct BfGroup **out_group);

/**
 * A group from `{"order":…,"table":[[…]],"labels":[…]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_group` a valid pointer.
 */
enum BfStatus bf_group_from_json(const char *json, struct BfGroup **out_group);

/**
 * # Safety
 * `g` must be null or a live group handle.
 */
void bf_group_free(struct BfGroup *g);

/**
 * Order, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live group handle.
 */
size_t bf_group_order(const struct BfGroup *g);

/**
 * Number of conjugacy classes, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live group handle.
 */
size_t bf_group_class_count(const struct BfGroup *g);

/**
 * Product of two element indices.
 *
 * # Safety
 * `g` must be a live group handle and `res` a valid pointer.
 */
enum BfStatus bf_group_mul(const struct BfGroup *g, uint32_t a, uint32_t b, uint32_t *res);

/**
 * A `rows x cols` matrix from row-major entries.
 *
 * # Safety
 * `data` must point to `rows * cols` readable entries and `out_matrix`
 * must be a valid pointer.
 */
enum BfStatus bf_matrix_new(const struct BfField *f,
                            size_t rows,
                            size_t cols,
                            const uint32_t *data,
                            struct BfMatrix **out_matrix);

/**
 * # Safety
 * `m` must be null or a live matrix handle.
 */
void bf_matrix_free(struct BfMatrix *m);

/**
 * # Safety
 * `m` must be a live matrix handle and `res` a valid pointer.
 */
enum BfStatus bf_matrix_rank(const struct BfMatrix *m, size_t *res);

/**
 * # Safety
 * `m` must be a live matrix handle and `res` a valid pointer.
 */
enum BfStatus bf_matrix_get(const struct BfMatrix *m, size_t row, size_t col, uint32_t *res);

/**
 * `a * b`.
 *
 * # Safety
 * `a`, `b` must be live matrix handles and `out_matrix` a valid pointer.
 */
enum BfStatus bf_matrix_mul(const struct BfMatrix *a,
                            const struct BfMatrix *b,
                            struct BfMatrix **out_matrix);

/**
 * Inverse of a square matrix; `BF_STATUS_MATH_ERROR` when singular.
 *
 * # Safety
 * `m` must be a live matrix handle and `out_matrix` a valid pointer.
 */
enum BfStatus bf_matrix_inverse(const struct BfMatrix *m, struct BfMatrix **out_matrix);

/**
 * Runs a suite described by a JSON object such as
 * `{"suite":"radical-tensor","p":3,"groups":"S3:A3,C2:1","n":2}`. The
 * report is written to `out_report` whenever the suite ran, including
 * when it returns `BF_STATUS_CHECK_FAILED`.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string and `out_report` a valid
 * pointer.
 */
enum BfStatus bf_run_suite(const char *spec_json, uint64_t seed, struct BfReport **out_report);

/**
 * Verifies a certificate given as JSON text; report semantics as for
 * [`bf_run_suite`].
 *
 * # Safety
 * `cert_json` must be a NUL-terminated string and `out_report` a valid
 * pointer.
 */
enum BfStatus bf_certify(const char *cert_json, uint64_t seed, struct BfReport **out_report);

/**
 * # Safety
 * `r` must be null or a live report handle.
 */
void bf_report_free(struct BfReport *r);

/**
 * Whether every check passed; false for a null handle.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
bool bf_report_ok(const struct BfReport *r);

/**
 * # Safety
 * `r` must be null or a live report handle.
 */
size_t bf_report_check_count(const struct BfReport *r);

/**
 * The report as JSON; free with [`bf_string_free`]. Null for a null
 * handle.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
char *bf_report_json(const struct BfReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCKFORGE_H */
