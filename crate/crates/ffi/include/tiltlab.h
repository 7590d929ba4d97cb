#ifndef TILTLAB_H
#define TILTLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TiltlabStatus {
  TILTLAB_STATUS_OK = 0,
  TILTLAB_STATUS_CHECK_FAILED = 1,
  TILTLAB_STATUS_PARSE_ERROR = 2,
  TILTLAB_STATUS_INTERNAL = 3,
  TILTLAB_STATUS_INVALID_ARGUMENT = 4,
  TILTLAB_STATUS_NULL_POINTER = 5,
} TiltlabStatus;

/**
 * A finite-dimensional bound quiver algebra.
 */
typedef struct TiltlabAlgebra TiltlabAlgebra;

/**
 * The d-cluster category of a Dynkin quiver.
 */
typedef struct TiltlabCluster TiltlabCluster;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *tiltlab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tiltlab_version(void);

/**
 * Parse an algebra in the text format. `field` may be null to use the field named in
 * the text, otherwise `"Q"` or `"Fp <p>"`.
 *
 * # Safety
 * `text` and `field` (if non-null) must be NUL-terminated strings; `out` must be writable.
 */
enum TiltlabStatus tiltlab_algebra_parse(const char *text,
                                         const char *field,
                                         size_t max_path_len,
                                         struct TiltlabAlgebra **out);

/**
 * # Safety
 * `a` must come from [`tiltlab_algebra_parse`] and not be used afterwards. Null is ignored.
 */
void tiltlab_algebra_free(struct TiltlabAlgebra *a);

/**
 * Dimension and number of vertices.
 *
 * # Safety
 * `a` must be a live handle; `dim` and `vertices` must be writable.
 */
enum TiltlabStatus tiltlab_algebra_shape(const struct TiltlabAlgebra *a,
                                         size_t *dim,
                                         size_t *vertices);

/**
 * Gorenstein and global dimension; `-1` stands for "at least `cutoff`".
 *
 * # Safety
 * `a` must be a live handle; the outputs must be writable.
 */
enum TiltlabStatus tiltlab_algebra_dimensions(const struct TiltlabAlgebra *a,
                                              size_t cutoff,
                                              int64_t *gorenstein,
                                              int64_t *global);

/**
 * `dim Ext^n(S_i, S_j)` for simples indexed from 0 in vertex order.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum TiltlabStatus tiltlab_ext_simples(const struct TiltlabAlgebra *a,
                                       size_t i,
                                       size_t j,
                                       size_t n,
                                       size_t *out);

/**
 * Duality `dim Ext^2(Y, X) = dim stable Ext^1(X, Y)` over pairs of simples.
 * Returns `Ok` when it holds, `CheckFailed` when it fails or the algebra is not
 * Gorenstein of dimension at most 1.
 *
 * # Safety
 * `a` must be a live handle.
 */
enum TiltlabStatus tiltlab_cy3_check(const struct TiltlabAlgebra *a, size_t cutoff);

/**
 * Cluster category of a Dynkin type such as `"A4"` or `"D4"`, with CY dimension `d`.
 *
 * # Safety
 * `dynkin` must be a NUL-terminated string; `out` must be writable.
 */
enum TiltlabStatus tiltlab_cluster_new(const char *dynkin, size_t d, struct TiltlabCluster **out);

/**
 * # Safety
 * `c` must come from [`tiltlab_cluster_new`] and not be used afterwards. Null is ignored.
 */
void tiltlab_cluster_free(struct TiltlabCluster *c);

/**
 * Number of objects in the fundamental domain and number of cluster-tilting sets.
 *
 * # Safety
 * `c` must be a live handle; the outputs must be writable.
 */
enum TiltlabStatus tiltlab_cluster_counts(const struct TiltlabCluster *c,
                                          size_t *domain,
                                          size_t *tilting_sets);

/**
 * Run the command line with `argv[0..argc]` (program name first). The exit code is
 * returned; the printed output is stored in `*output`, to be released with
 * [`tiltlab_string_free`]. `output` may be null.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings.
 */
int tiltlab_run(int argc, const char *const *argv, char **output);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void tiltlab_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TILTLAB_H */
