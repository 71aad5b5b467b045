#ifndef EQUILIB_H
#define EQUILIB_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum EquilibStatus {
  EQUILIB_STATUS_OK = 0,
  EQUILIB_STATUS_NULL_ARGUMENT = 1,
  EQUILIB_STATUS_INVALID_UTF8 = 2,
  /**
   * Invalid configuration or I/O failure.
   */
  EQUILIB_STATUS_CONFIG = 3,
  /**
   * The requested state or point lies outside the model's domain.
   */
  EQUILIB_STATUS_DOMAIN = 4,
  /**
   * A numerical routine failed.
   */
  EQUILIB_STATUS_NUMERICAL = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  EQUILIB_STATUS_PANIC = 6,
  /**
   * Index past the end of a sequence.
   */
  EQUILIB_STATUS_OUT_OF_RANGE = 7,
} EquilibStatus;

/**
 * Why a traced path ended.
 */
typedef enum EquilibStopReason {
  EQUILIB_STOP_REASON_REGION_EXIT = 0,
  EQUILIB_STOP_REASON_DOMAIN_BOUNDARY = 1,
  EQUILIB_STOP_REASON_STEP_LIMIT = 2,
  EQUILIB_STOP_REASON_CONVERGED = 3,
} EquilibStopReason;

/**
 * Chemical model built from a TOML run configuration.
 */
typedef struct EquilibModel EquilibModel;

/**
 * Maximal-reaction path.
 */
typedef struct EquilibPath EquilibPath;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *equilib_last_error_message(void);

/**
 * Builds a model from TOML configuration text.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` valid for a write.
 */
enum EquilibStatus equilib_model_from_toml(const char *toml, struct EquilibModel **out);

/**
 * # Safety
 * `model` must be null or a pointer from [`equilib_model_from_toml`] not yet freed.
 */
void equilib_model_free(struct EquilibModel *model);

/**
 * Activity quotient at (T [K], P [Pa]).
 *
 * # Safety
 * `model` must be live and `out` valid for a write.
 */
enum EquilibStatus equilib_quotient(const struct EquilibModel *model,
                                    double t,
                                    double p,
                                    double *out);

/**
 * Slope dG/dxi at (T, P), J/mol.
 *
 * # Safety
 * `model` must be live and `out` valid for a write.
 */
enum EquilibStatus equilib_dg_dxi(const struct EquilibModel *model,
                                  double t,
                                  double p,
                                  double *out);

/**
 * Aggregate error term at (T, P), J/mol.
 *
 * # Safety
 * `model` must be live and `out` valid for a write.
 */
enum EquilibStatus equilib_epsilon(const struct EquilibModel *model,
                                   double t,
                                   double p,
                                   double *out);

/**
 * Gradient of Q in scaled units, `(T_ref dQ/dT, P° dQ/dP)`.
 *
 * # Safety
 * `model` must be live; `d_t` and `d_p` valid for writes.
 */
enum EquilibStatus equilib_scaled_grad(const struct EquilibModel *model,
                                       double t,
                                       double p,
                                       double *d_t,
                                       double *d_p);

/**
 * Nernst offset `E - E°` in volts for a cell transferring `n_electrons`.
 *
 * # Safety
 * `model` must be live and `out` valid for a write.
 */
enum EquilibStatus equilib_nernst_potential(const struct EquilibModel *model,
                                            uint32_t n_electrons,
                                            double t,
                                            double p,
                                            double *out);

/**
 * Traces a maximal-reaction path from (T, P).
 *
 * # Safety
 * `model` must be live and `out` valid for a write.
 */
enum EquilibStatus equilib_trace_maximal(const struct EquilibModel *model,
                                         double t,
                                         double p,
                                         double step,
                                         size_t max_steps,
                                         double direction,
                                         struct EquilibPath **out);

/**
 * Number of points on `path`, or 0 for a null handle.
 *
 * # Safety
 * `path` must be null or live.
 */
size_t equilib_path_len(const struct EquilibPath *path);

/**
 * Point `index` of `path`: arc length, temperature, pressure, quotient.
 *
 * # Safety
 * `path` must be live; every output pointer valid for a write.
 */
enum EquilibStatus equilib_path_point(const struct EquilibPath *path,
                                      size_t index,
                                      double *s,
                                      double *t,
                                      double *p,
                                      double *q);

/**
 * Why the path ended.
 *
 * # Safety
 * `path` must be live and `out` valid for a write.
 */
enum EquilibStatus equilib_path_stop_reason(const struct EquilibPath *path,
                                            enum EquilibStopReason *out);

/**
 * # Safety
 * `path` must be null or a pointer from [`equilib_trace_maximal`] not yet freed.
 */
void equilib_path_free(struct EquilibPath *path);

/**
 * Runs a command on TOML configuration text and returns the CSV output.
 * `command` may be null to use the config's own `command` key. Relative
 * file references resolve against the current directory. Free the result
 * with [`equilib_string_free`].
 *
 * # Safety
 * `toml` must be a NUL-terminated string, `command` null or one, and
 * `out_csv` valid for a write.
 */
enum EquilibStatus equilib_run(const char *toml, const char *command, char **out_csv);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void equilib_string_free(char *s);

/**
 * Version string; static, never freed.
 */
const char *equilib_version(void);

/**
 * Status code as an int, for bindings without enum support.
 */
int equilib_status_code(enum EquilibStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQUILIB_H */
