#ifndef ALPS_H
#define ALPS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum AlpsStatus {
  ALPS_STATUS_OK = 0,
  ALPS_STATUS_NULL_POINTER = 1,
  ALPS_STATUS_INVALID_ARGUMENT = 2,
  ALPS_STATUS_PARSE = 3,
  ALPS_STATUS_IO = 4,
  ALPS_STATUS_INFEASIBLE = 5,
  ALPS_STATUS_ORACLE_GUARD = 6,
  ALPS_STATUS_PANIC = 7,
} AlpsStatus;

/**
 * A Steiner tree instance.
 */
typedef struct AlpsInstance AlpsInstance;

/**
 * A set of item ids with its weight under the original weights.
 */
typedef struct AlpsSolution AlpsSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *alps_last_error_message(void);

/**
 * Parses SteinLib `.stp` text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum AlpsStatus alps_instance_parse_stp(const char *text, struct AlpsInstance **out);

/**
 * Reads an `.stp` file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum AlpsStatus alps_instance_load_stp(const char *path, struct AlpsInstance **out);

/**
 * Builds an instance from `m` edges `(us[i], vs[i], ws[i])` on `n`
 * vertices and `k` terminals.
 *
 * # Safety
 * Arrays must hold at least `m` (resp. `k`) elements; `out` must be writable.
 */
enum AlpsStatus alps_instance_new(size_t n,
                                  const size_t *us,
                                  const size_t *vs,
                                  const double *ws,
                                  size_t m,
                                  const size_t *terminals,
                                  size_t k,
                                  struct AlpsInstance **out);

/**
 * The tight ALPS instance and its prediction (as a solution handle whose
 * weight is the prediction's weight).
 *
 * # Safety
 * Both output pointers must be writable.
 */
enum AlpsStatus alps_tight_example(size_t k,
                                   double eps,
                                   double beta,
                                   struct AlpsInstance **out_instance,
                                   struct AlpsSolution **out_prediction);

/**
 * # Safety
 * `instance` must come from an `alps_instance_*` constructor (or be NULL).
 */
void alps_instance_free(struct AlpsInstance *instance);

/**
 * # Safety
 * `instance` must be a live handle or NULL (which yields 0).
 */
size_t alps_instance_vertex_count(const struct AlpsInstance *instance);

/**
 * # Safety
 * `instance` must be a live handle or NULL (which yields 0).
 */
size_t alps_instance_edge_count(const struct AlpsInstance *instance);

/**
 * # Safety
 * `instance` must be a live handle or NULL (which yields 0).
 */
size_t alps_instance_terminal_count(const struct AlpsInstance *instance);

/**
 * Mehlhorn's 2-approximation.
 *
 * # Safety
 * `instance` must be a live handle; `out` must be writable.
 */
enum AlpsStatus alps_mehlhorn(const struct AlpsInstance *instance, struct AlpsSolution **out);

/**
 * ALPS with predicted edge ids `pred[0..pred_len]`. Pass `INFINITY` for
 * `alpha = ∞`.
 *
 * # Safety
 * `instance` must be a live handle, `pred` must hold `pred_len` ids and
 * `out` must be writable.
 */
enum AlpsStatus alps_alps(const struct AlpsInstance *instance,
                          const size_t *pred,
                          size_t pred_len,
                          double alpha,
                          struct AlpsSolution **out);

/**
 * ALPS over the geometric α grid of step `1 + epsilon`; the chosen α is
 * available from [`alps_solution_alpha`].
 *
 * # Safety
 * As for [`alps_alps`].
 */
enum AlpsStatus alps_alpha_search(const struct AlpsInstance *instance,
                                  const size_t *pred,
                                  size_t pred_len,
                                  double epsilon,
                                  struct AlpsSolution **out);

/**
 * Exact Steiner tree for small instances.
 *
 * # Safety
 * `instance` must be a live handle; `out` must be writable.
 */
enum AlpsStatus alps_exact_steiner(const struct AlpsInstance *instance, struct AlpsSolution **out);

/**
 * Vertex cover on `n` vertices and `m` edges `(us[i], vs[i])` with
 * predicted vertices `pred`. `weights` may be NULL for unit weights; a
 * nonzero `robust` also runs the plain algorithm and keeps the lighter cover.
 *
 * # Safety
 * Arrays must hold the stated number of elements; `out` must be writable.
 */
enum AlpsStatus alps_vc_with_predictions(size_t n,
                                         const size_t *us,
                                         const size_t *vs,
                                         size_t m,
                                         const double *weights,
                                         const size_t *pred,
                                         size_t pred_len,
                                         int robust,
                                         struct AlpsSolution **out);

/**
 * Independent set; arguments as for [`alps_vc_with_predictions`].
 *
 * # Safety
 * As for [`alps_vc_with_predictions`].
 */
enum AlpsStatus alps_is_with_predictions(size_t n,
                                         const size_t *us,
                                         const size_t *vs,
                                         size_t m,
                                         const double *weights,
                                         const size_t *pred,
                                         size_t pred_len,
                                         int robust,
                                         struct AlpsSolution **out);

/**
 * Knapsack packing from a predicted packing; the solution weight is the
 * packed worth.
 *
 * # Safety
 * `sizes` and `worths` must hold `n` elements, `pred` `pred_len`; `out`
 * must be writable.
 */
enum AlpsStatus alps_knapsack_with_predictions(size_t n,
                                               const double *sizes,
                                               const double *worths,
                                               double capacity,
                                               const size_t *pred,
                                               size_t pred_len,
                                               int robust,
                                               struct AlpsSolution **out);

/**
 * Number of items in the solution (0 for NULL).
 *
 * # Safety
 * `sol` must be a live handle or NULL.
 */
size_t alps_solution_len(const struct AlpsSolution *sol);

/**
 * Copies up to `capacity` item ids, ascending, into `buf`; returns the
 * number written.
 *
 * # Safety
 * `sol` must be a live handle; `buf` must have room for `capacity` ids.
 */
size_t alps_solution_items(const struct AlpsSolution *sol, size_t *buf, size_t capacity);

/**
 * Weight (or worth) of the solution under the original weights; NaN for NULL.
 *
 * # Safety
 * `sol` must be a live handle or NULL.
 */
double alps_solution_weight(const struct AlpsSolution *sol);

/**
 * The α the solution was computed with, or NaN when not applicable.
 *
 * # Safety
 * `sol` must be a live handle or NULL.
 */
double alps_solution_alpha(const struct AlpsSolution *sol);

/**
 * # Safety
 * `sol` must come from this library (or be NULL).
 */
void alps_solution_free(struct AlpsSolution *sol);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALPS_H */
