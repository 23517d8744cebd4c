/* Generated by cbindgen; do not edit. */

#ifndef EPSDENS_H
#define EPSDENS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every function.
 */
typedef enum EpsdensStatus {
  EPSDENS_STATUS_OK = 0,
  EPSDENS_STATUS_NULL_POINTER = 1,
  EPSDENS_STATUS_INVALID_UTF8 = 2,
  EPSDENS_STATUS_PARSE_ERROR = 3,
  EPSDENS_STATUS_INVALID_INPUT = 4,
  /**
   * A fit failed, a check failed, or the request left the verified window.
   */
  EPSDENS_STATUS_COMPUTATION_FAILURE = 5,
  EPSDENS_STATUS_PANIC = 6,
} EpsdensStatus;

/**
 * Which closed-form fixture to build.
 */
typedef enum EpsdensFixture {
  EPSDENS_FIXTURE_NAGATA = 0,
  EPSDENS_FIXTURE_CUTKOSKY = 1,
} EpsdensFixture;

/**
 * A density function with exact pieces.
 */
typedef struct EpsdensDensity EpsdensDensity;

/**
 * A ring together with a monomial ideal in it.
 */
typedef struct EpsdensIdeal EpsdensIdeal;

/**
 * Tuning knobs; obtain defaults from [`epsdens_options_default`].
 */
typedef struct EpsdensOptions {
  uint32_t n_max;
  uint32_t k_max;
  /**
   * Fit degree override; negative means the default `d - 1`.
   */
  int32_t degree;
  uint32_t offset_kmax;
  int64_t step_numerator;
  int64_t step_denominator;
} EpsdensOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Fills `out` with the default options.
 *
 * # Safety
 * `out` must be null or point to writable storage for one `EpsdensOptions`.
 */
enum EpsdensStatus epsdens_options_default(struct EpsdensOptions *out);

/**
 * Parses `{"vars": [...], "gens": [...], "quotient": [...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum EpsdensStatus epsdens_ideal_parse_json(const char *json, struct EpsdensIdeal **out);

/**
 * Releases an ideal handle; null is ignored.
 *
 * # Safety
 * `ideal` must be null or a handle from [`epsdens_ideal_parse_json`] not yet freed.
 */
void epsdens_ideal_free(struct EpsdensIdeal *ideal);

/**
 * Number of minimal generators, or 0 for a null handle.
 *
 * # Safety
 * `ideal` must be null or a live handle.
 */
uintptr_t epsdens_ideal_generator_count(const struct EpsdensIdeal *ideal);

/**
 * Density of the ordinary powers.
 *
 * # Safety
 * `ideal` must be a live handle, `options` null or valid, `out` writable.
 */
enum EpsdensStatus epsdens_ordinary_density(const struct EpsdensIdeal *ideal,
                                            const struct EpsdensOptions *options,
                                            struct EpsdensDensity **out);

/**
 * Density of the saturated powers.
 *
 * # Safety
 * As [`epsdens_ordinary_density`].
 */
enum EpsdensStatus epsdens_saturated_density(const struct EpsdensIdeal *ideal,
                                             const struct EpsdensOptions *options,
                                             struct EpsdensDensity **out);

/**
 * The ε-density, saturated minus ordinary.
 *
 * # Safety
 * As [`epsdens_ordinary_density`].
 */
enum EpsdensStatus epsdens_epsilon_density(const struct EpsdensIdeal *ideal,
                                           const struct EpsdensOptions *options,
                                           struct EpsdensDensity **out);

/**
 * ε(I) as an exact `"p/q"` string.
 *
 * # Safety
 * `ideal` must be a live handle, `options` null or valid, `out` writable.
 */
enum EpsdensStatus epsdens_epsilon_value(const struct EpsdensIdeal *ideal,
                                         const struct EpsdensOptions *options,
                                         char **out);

/**
 * Builds a closed-form fixture; `s` is used by `Nagata` only.
 *
 * # Safety
 * `out` must be writable.
 */
enum EpsdensStatus epsdens_fixture(enum EpsdensFixture which,
                                   int64_t s_numerator,
                                   int64_t s_denominator,
                                   struct EpsdensDensity **out);

/**
 * Releases a density handle; null is ignored.
 *
 * # Safety
 * `density` must be null or a live handle.
 */
void epsdens_density_free(struct EpsdensDensity *density);

/**
 * Serializes a density as JSON.
 *
 * # Safety
 * `density` must be a live handle, `out` writable.
 */
enum EpsdensStatus epsdens_density_to_json(const struct EpsdensDensity *density, char **out);

/**
 * Number of breakpoints.
 *
 * # Safety
 * `density` must be null or a live handle.
 */
uintptr_t epsdens_density_breakpoint_count(const struct EpsdensDensity *density);

/**
 * Evaluates at `numerator / denominator`. The exact value is written to
 * `out_exact` (if non-null) and a decimal approximation to `out_approx`
 * (if non-null).
 *
 * # Safety
 * `density` must be a live handle; the out pointers null or writable.
 */
enum EpsdensStatus epsdens_density_eval(const struct EpsdensDensity *density,
                                        int64_t numerator,
                                        int64_t denominator,
                                        char **out_exact,
                                        double *out_approx);

/**
 * Vector partition function of the matrix with `r` unit columns `(1, 0)`
 * and `column_count` columns `(columns[2k], columns[2k+1])`, at `(m, n)`,
 * written as a decimal string.
 *
 * # Safety
 * `columns` must point to `2 * column_count` readable values (or be null
 * when `column_count` is 0); `out` must be writable.
 */
enum EpsdensStatus epsdens_vpf_eval(uint32_t r,
                                    const uint32_t *columns,
                                    uintptr_t column_count,
                                    int64_t m,
                                    int64_t n,
                                    char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void epsdens_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *epsdens_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPSDENS_H */
