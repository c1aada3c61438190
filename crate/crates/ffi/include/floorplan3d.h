/* SPDX-License-Identifier: Apache-2.0 */

#ifndef FLOORPLAN3D_H
#define FLOORPLAN3D_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FpStatus {
  FP_STATUS_OK = 0,
  FP_STATUS_NULL_POINTER = 1,
  FP_STATUS_INVALID_UTF8 = 2,
  FP_STATUS_PARSE_ERROR = 3,
  FP_STATUS_INVALID_ARGUMENT = 4,
  FP_STATUS_RUNTIME_ERROR = 5,
  FP_STATUS_PANIC = 6,
} FpStatus;

typedef enum FpRallyMode {
  FP_RALLY_MODE_CORNER = 0,
  FP_RALLY_MODE_CENTER = 1,
  FP_RALLY_MODE_EXPLICIT = 2,
} FpRallyMode;

/**
 * Parsed netlist and its layout hypergraph.
 */
typedef struct FpNetlist FpNetlist;

/**
 * Outcome of one pipeline run.
 */
typedef struct FpResult FpResult;

typedef struct FpStats {
  size_t blocks;
  size_t nets;
  size_t neighbor_min;
  size_t neighbor_max;
  double neighbor_avg;
} FpStats;

/**
 * Run parameters. Zero grid dimensions or zero iterations select defaults.
 */
typedef struct FpJobOptions {
  uint32_t grid_x;
  uint32_t grid_y;
  uint32_t grid_z;
  double tau;
  uint64_t max_iters;
  enum FpRallyMode rally_mode;
  double rally_x;
  double rally_y;
  double p1;
  uint64_t seed;
  double die_height;
  bool bundles;
} FpJobOptions;

typedef struct FpVolume {
  double vx;
  double vy;
  size_t layers;
} FpVolume;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse YAL text. On success `*out` receives a handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum FpStatus fp_netlist_parse(const char *text, struct FpNetlist **out);

/**
 * Read and parse a YAL file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum FpStatus fp_netlist_load(const char *path, struct FpNetlist **out);

/**
 * # Safety
 * `netlist` must be null or a handle from `fp_netlist_parse`/`fp_netlist_load`
 * not yet freed.
 */
void fp_netlist_free(struct FpNetlist *netlist);

/**
 * # Safety
 * `netlist` must be a live handle and `out` writable.
 */
enum FpStatus fp_netlist_stats(const struct FpNetlist *netlist, struct FpStats *out);

/**
 * Number of components (placeable blocks).
 *
 * # Safety
 * `netlist` must be null or a live handle.
 */
size_t fp_netlist_component_count(const struct FpNetlist *netlist);

struct FpJobOptions fp_job_default(void);

/**
 * Place, squeeze and score one seed.
 *
 * # Safety
 * `netlist` and `options` must be live; `out` writable.
 */
enum FpStatus fp_pipeline_run(const struct FpNetlist *netlist,
                              const struct FpJobOptions *options,
                              struct FpResult **out);

/**
 * # Safety
 * `result` must be live and `out` writable.
 */
enum FpStatus fp_result_wirelength(const struct FpResult *result, double *out);

/**
 * # Safety
 * `result` must be live and `out` writable.
 */
enum FpStatus fp_result_volume(const struct FpResult *result, struct FpVolume *out);

/**
 * Layout as JSON; release the string with `fp_string_free`.
 *
 * # Safety
 * `result` must be live and `out` writable.
 */
enum FpStatus fp_result_layout_json(const struct FpResult *result, char **out);

/**
 * # Safety
 * `result` must be null or a live handle from `fp_pipeline_run`.
 */
void fp_result_free(struct FpResult *result);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void fp_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library on the same thread.
 */
const char *fp_last_error(void);

/**
 * Half-perimeter wire-length of `count` endpoints given as interleaved
 * `x, y, z` triples.
 *
 * # Safety
 * `xyz` must point to `3 * count` doubles; `out` writable.
 */
enum FpStatus fp_net_hpwl(const double *xyz, size_t count, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLOORPLAN3D_H */
