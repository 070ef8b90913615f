#ifndef CHEEGER_H
#define CHEEGER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum CheegerStatus {
  CHEEGER_STATUS_OK = 0,
  // A required pointer argument was null.
  CHEEGER_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  CHEEGER_STATUS_INVALID_UTF8 = 2,
  CHEEGER_STATUS_INVALID_INPUT = 3,
  CHEEGER_STATUS_DEPTH_LIMIT = 4,
  CHEEGER_STATUS_INVALID_PARAMETERS = 5,
  CHEEGER_STATUS_UNVALIDATED = 6,
  CHEEGER_STATUS_CERTIFICATION_FAILURE = 7,
  CHEEGER_STATUS_DEGENERATE_THRESHOLD = 8,
  CHEEGER_STATUS_MEMORY_LIMIT = 9,
  CHEEGER_STATUS_CONFIG = 10,
  CHEEGER_STATUS_IO = 11,
  CHEEGER_STATUS_JSON = 12,
  // The library panicked; the handle arguments should be considered unusable.
  CHEEGER_STATUS_PANIC = 13,
} CheegerStatus;

// Domain description, `Omega_eps`, `Omega_0` or a disk with explicit holes.
typedef struct CheegerDomain CheegerDomain;

// Coverage raster of a domain or a relaxed indicator.
typedef struct CheegerField CheegerField;

// Output of the grid Cheeger solver.
typedef struct CheegerSolution CheegerSolution;

// Outward-rounded enclosures of the measures of a domain.
typedef struct CheegerMeasures {
  double perimeter_lo;
  double perimeter_hi;
  double area_lo;
  double area_hi;
  // `H1` of the topological boundary.
  double boundary_lo;
  double boundary_hi;
  // Nonzero when the `delta` fields are set (hole sequences only).
  uint8_t has_delta;
  double delta_lo;
  double delta_hi;
} CheegerMeasures;

typedef struct CheegerFieldInfo {
  size_t nx;
  size_t ny;
  double pixel;
  // Lower-left corner of pixel `(0, 0)`.
  double origin_x;
  double origin_y;
} CheegerFieldInfo;

typedef struct CheegerSolutionInfo {
  double h_estimate;
  double perimeter;
  double area;
  double threshold;
  uint8_t converged;
  size_t outer_steps;
  size_t grid;
  double seconds;
} CheegerSolutionInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into the library on this thread.
const char *cheeger_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *cheeger_version(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void cheeger_string_free(char *s);

// The unit disk with no obstacles.
//
// # Safety
// `out_domain` must be a valid pointer to writable storage for a handle.
enum CheegerStatus cheeger_domain_plain_disk(struct CheegerDomain **out_domain);

// Unit disk minus the bumps over the fat Cantor set of parameter `eps`, `depth` levels deep.
//
// # Safety
// `out_domain` must be a valid pointer to writable storage for a handle.
enum CheegerStatus cheeger_domain_build_cantor(double eps,
                                               size_t depth,
                                               struct CheegerDomain **out_domain);

// Unit disk minus the default hole sequence, truncated after block `j1 = depth`.
// Fails with `InvalidParameters` when the sequence violates an admissibility condition.
//
// # Safety
// `out_domain` must be a valid pointer to writable storage for a handle.
enum CheegerStatus cheeger_domain_build_porous(double eps1,
                                               double safety,
                                               uint32_t depth,
                                               struct CheegerDomain **out_domain);

// # Safety
// `json` must be a NUL-terminated string and `out_domain` valid for writing.
enum CheegerStatus cheeger_domain_from_json(const char *json, struct CheegerDomain **out_domain);

// Serializes the domain; free the string with [`cheeger_string_free`].
//
// # Safety
// `domain` must be a live handle and `out_json` valid for writing.
enum CheegerStatus cheeger_domain_to_json(const struct CheegerDomain *domain, char **out_json);

// # Safety
// `path` must be a NUL-terminated string and `out_domain` valid for writing.
enum CheegerStatus cheeger_domain_load(const char *path, struct CheegerDomain **out_domain);

// # Safety
// `domain` must be a live handle and `path` a NUL-terminated string.
enum CheegerStatus cheeger_domain_save(const struct CheegerDomain *domain, const char *path);

// Number of bumps or holes; 0 for a null handle.
//
// # Safety
// `domain` must be null or a live handle.
size_t cheeger_domain_obstacle_count(const struct CheegerDomain *domain);

// Writes 1 to `out_inside` when `(x, y)` lies in the open domain, else 0.
//
// # Safety
// `domain` must be a live handle and `out_inside` valid for writing.
enum CheegerStatus cheeger_domain_contains(const struct CheegerDomain *domain,
                                           double x,
                                           double y,
                                           uint8_t *out_inside);

// # Safety
// `domain` must be a live handle and `out_measures` valid for writing.
enum CheegerStatus cheeger_domain_measure(const struct CheegerDomain *domain,
                                          struct CheegerMeasures *out_measures);

// # Safety
// `domain` must be null or a live handle; it is invalid afterwards.
void cheeger_domain_free(struct CheegerDomain *domain);

// Coverage raster of `domain` on an `n x n` grid framing the outer disk.
// `subsamples = 0` selects the default.
//
// # Safety
// `domain` must be a live handle and `out_field` valid for writing.
enum CheegerStatus cheeger_rasterize(const struct CheegerDomain *domain,
                                     size_t n,
                                     size_t subsamples,
                                     struct CheegerField **out_field);

// # Safety
// `field` must be a live handle and `out_info` valid for writing.
enum CheegerStatus cheeger_field_info(const struct CheegerField *field,
                                      struct CheegerFieldInfo *out_info);

// Copies the `nx * ny` values, row-major from the bottom row, into `buf`.
// Fails with `InvalidInput` when `len` is too small.
//
// # Safety
// `field` must be a live handle and `buf` valid for `len` writes.
enum CheegerStatus cheeger_field_copy_values(const struct CheegerField *field,
                                             double *buf,
                                             size_t len);

// Perimeter and area of the superlevel set `field >= threshold`.
//
// # Safety
// `field` must be a live handle; the outputs must be valid for writing.
enum CheegerStatus cheeger_field_measure_set(const struct CheegerField *field,
                                             double threshold,
                                             double *out_perimeter,
                                             double *out_area);

// # Safety
// `field` must be null or a live handle; it is invalid afterwards.
void cheeger_field_free(struct CheegerField *field);

// Runs the solver on a domain raster. `config_json` is null for the defaults, or a
// JSON object with any of the solver configuration keys.
//
// # Safety
// `field` must be a live handle, `config_json` null or NUL-terminated, and
// `out_solution` valid for writing.
enum CheegerStatus cheeger_solve(const struct CheegerField *field,
                                 const char *config_json,
                                 struct CheegerSolution **out_solution);

// # Safety
// `solution` must be a live handle and `out_info` valid for writing.
enum CheegerStatus cheeger_solution_info(const struct CheegerSolution *solution,
                                         struct CheegerSolutionInfo *out_info);

// Result summary JSON, including the per-level history. `domain_field` may be
// null; when given, the summary carries the minimality gap against it.
//
// # Safety
// `solution` must be a live handle, `domain_field` null or live, `out_json` valid for writing.
enum CheegerStatus cheeger_solution_to_json(const struct CheegerSolution *solution,
                                            const struct CheegerField *domain_field,
                                            char **out_json);

// New field handle holding a copy of the relaxed indicator.
//
// # Safety
// `solution` must be a live handle and `out_field` valid for writing.
enum CheegerStatus cheeger_solution_indicator(const struct CheegerSolution *solution,
                                              struct CheegerField **out_field);

// # Safety
// `solution` must be null or a live handle; it is invalid afterwards.
void cheeger_solution_free(struct CheegerSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHEEGER_H */
