#ifndef COVSKETCH_H
#define COVSKETCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CovStatus {
  COV_STATUS_OK = 0,
  COV_STATUS_NULL_POINTER = 1,
  COV_STATUS_INVALID_ARGUMENT = 2,
  COV_STATUS_PARSE = 3,
  COV_STATUS_INFEASIBLE = 4,
  COV_STATUS_IO = 5,
  COV_STATUS_PANIC = 6,
  /**
   * Reserved for failures with no better code.
   */
  COV_STATUS_INTERNAL = 7,
} CovStatus;

/**
 * Coverage instance handle.
 */
typedef struct CovInstance CovInstance;

/**
 * Sketch handle.
 */
typedef struct CovSketch CovSketch;

/**
 * Solution handle.
 */
typedef struct CovSolution CovSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never null.
 */
const char *cov_status_string(enum CovStatus status);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `cap`). Returns the full message length
 * excluding the terminator, so a caller can size a retry.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t cov_last_error(char *buf, size_t cap);

/**
 * Loads an edge-list file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum CovStatus cov_instance_load(const char *path, struct CovInstance **out);

/**
 * Generates a planted instance (`k` disjoint sets over `m` elements plus
 * `kprime` decoys).
 *
 * # Safety
 * `out` must be writable.
 */
enum CovStatus cov_instance_generate_planted(size_t k,
                                             size_t m,
                                             size_t kprime,
                                             double eps,
                                             uint64_t seed,
                                             struct CovInstance **out);

/**
 * Set count, element count and edge count of an instance. Any output
 * pointer may be null.
 *
 * # Safety
 * `inst` must be a live instance handle.
 */
enum CovStatus cov_instance_dims(const struct CovInstance *inst,
                                 size_t *n,
                                 size_t *m,
                                 size_t *edges);

/**
 * # Safety
 * `inst` must be null or a handle not yet freed.
 */
void cov_instance_free(struct CovInstance *inst);

/**
 * Practical sketch: keep each element with probability `rho`, at most
 * `sigma` edges each.
 *
 * # Safety
 * `inst` must be a live instance handle; `out` must be writable.
 */
enum CovStatus cov_sketch_practical(const struct CovInstance *inst,
                                    double rho,
                                    size_t sigma,
                                    uint64_t seed,
                                    struct CovSketch **out);

/**
 * Theory-mode sketch for k-cover with accuracy `eps`.
 *
 * # Safety
 * `inst` must be a live instance handle; `out` must be writable.
 */
enum CovStatus cov_sketch_theory(const struct CovInstance *inst,
                                 size_t k,
                                 double eps,
                                 double delta_dprime,
                                 uint64_t seed,
                                 struct CovSketch **out);

/**
 * Edge count of a sketch.
 *
 * # Safety
 * `sketch` must be a live sketch handle; `out` must be writable.
 */
enum CovStatus cov_sketch_edge_count(const struct CovSketch *sketch, size_t *out);

/**
 * # Safety
 * `sketch` must be null or a handle not yet freed.
 */
void cov_sketch_free(struct CovSketch *sketch);

/**
 * Greedy k-cover on an instance.
 *
 * # Safety
 * `inst` must be a live instance handle; `out` must be writable.
 */
enum CovStatus cov_greedy_instance(const struct CovInstance *inst,
                                   size_t k,
                                   struct CovSolution **out);

/**
 * Greedy k-cover on a sketch; the value is sketch coverage.
 *
 * # Safety
 * `sketch` must be a live sketch handle; `out` must be writable.
 */
enum CovStatus cov_greedy_sketch(const struct CovSketch *sketch,
                                 size_t k,
                                 struct CovSolution **out);

/**
 * Set cover with outliers; `use_sketch` selects the sketch engine.
 * Returns `COV_STATUS_INFEASIBLE` when no cover exists.
 *
 * # Safety
 * `inst` must be a live instance handle; `out` must be writable.
 */
enum CovStatus cov_set_cover_outliers(const struct CovInstance *inst,
                                      double lambda,
                                      double eps,
                                      double delta_dprime,
                                      uint64_t seed,
                                      bool use_sketch,
                                      struct CovSolution **out);

/**
 * Four-round simulated k-cover. `divergence` (may be null) receives
 * whether the distributed sketch may differ from the single-process one.
 *
 * # Safety
 * `inst` must be a live instance handle; `out` must be writable.
 */
enum CovStatus cov_simulate_kcover(const struct CovInstance *inst,
                                   size_t k,
                                   double eps,
                                   double delta_dprime,
                                   uint64_t seed,
                                   size_t machines,
                                   struct CovSolution **out,
                                   bool *divergence);

/**
 * Coverage of the `len` set ids at `ids` on an instance.
 *
 * # Safety
 * `inst` must be a live handle; `ids` must point to `len` values (or be
 * null with `len == 0`); `out` must be writable.
 */
enum CovStatus cov_coverage(const struct CovInstance *inst,
                            const uint32_t *ids,
                            size_t len,
                            uint64_t *out);

/**
 * Coverage value recorded in a solution.
 *
 * # Safety
 * `sol` must be a live solution handle; `out` must be writable.
 */
enum CovStatus cov_solution_value(const struct CovSolution *sol, uint64_t *out);

/**
 * Number of chosen sets.
 *
 * # Safety
 * `sol` must be a live solution handle; `out` must be writable.
 */
enum CovStatus cov_solution_len(const struct CovSolution *sol, size_t *out);

/**
 * Copies up to `cap` chosen ids, in pick order, into `buf`; `written`
 * receives the number copied.
 *
 * # Safety
 * `sol` must be a live handle; `buf` must hold `cap` values; `written`
 * must be writable.
 */
enum CovStatus cov_solution_ids(const struct CovSolution *sol,
                                uint32_t *buf,
                                size_t cap,
                                size_t *written);

/**
 * # Safety
 * `sol` must be null or a handle not yet freed.
 */
void cov_solution_free(struct CovSolution *sol);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVSKETCH_H */
