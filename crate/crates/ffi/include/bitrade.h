#ifndef BITRADE_H
#define BITRADE_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Values match the command-line exit codes.
 */
typedef enum BtStatus {
  BT_STATUS_OK = 0,
  BT_STATUS_FAILURE = 1,
  BT_STATUS_AXIOM = 2,
  BT_STATUS_PARSE = 3,
  BT_STATUS_SINGULAR = 4,
  BT_STATUS_NOT_SEPARATED = 5,
  BT_STATUS_NULL_ARGUMENT = 6,
  BT_STATUS_OUT_OF_RANGE = 7,
} BtStatus;

/**
 * Opaque validated bitrade.
 */
typedef struct BtBitrade BtBitrade;

typedef struct BtMetrics {
  uintptr_t size;
  uintptr_t rows;
  uintptr_t cols;
  uintptr_t syms;
  uintptr_t m;
  int64_t euler_characteristic;
  /**
   * -1 when the semidual is not a surface.
   */
  int64_t genus;
  bool spherical;
  bool separated;
  bool indecomposable;
} BtMetrics;

/**
 * Parses and validates a bitrade document. On success `*out` receives a new
 * handle owned by the caller.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` valid for writes.
 */
enum BtStatus bt_bitrade_from_json(const char *json, struct BtBitrade **out);

/**
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void bt_bitrade_free(struct BtBitrade *t);

/**
 * # Safety
 * `t` must be a live handle and `out` valid for writes.
 */
enum BtStatus bt_bitrade_metrics(const struct BtBitrade *t, struct BtMetrics *out);

/**
 * Solves the system pointed at star triple `pivot` (index in canonical
 * order) and writes the solution as JSON.
 *
 * # Safety
 * `t` must be a live handle and `out` valid for writes.
 */
enum BtStatus bt_solve_json(const struct BtBitrade *t, uintptr_t pivot, char **out);

/**
 * Dissects at `pivot` and writes the SVG rendering.
 *
 * # Safety
 * `t` must be a live handle and `out` valid for writes.
 */
enum BtStatus bt_dissect_svg(const struct BtBitrade *t,
                             uintptr_t pivot,
                             bool equilateral,
                             char **out);

/**
 * Writes the group data (G, H, embeddability, integer rank) as JSON.
 *
 * # Safety
 * `t` must be a live handle and `out` valid for writes.
 */
enum BtStatus bt_embed_json(const struct BtBitrade *t, char **out);

/**
 * Number of trigons, or -1 on error.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
int64_t bt_trigon_count(const struct BtBitrade *t);

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next library call on the same thread; do not free it.
 */
const char *bt_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void bt_string_free(char *s);

#endif  /* BITRADE_H */
