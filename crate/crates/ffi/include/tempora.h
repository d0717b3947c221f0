#ifndef TEMPORA_H
#define TEMPORA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TemporaMethod {
  TEMPORA_METHOD_SIMPLIFIED = 0,
  TEMPORA_METHOD_MOMENTS = 1,
} TemporaMethod;

typedef enum TemporaSolver {
  // Interior point for small programs, ADMM otherwise.
  TEMPORA_SOLVER_AUTO = 0,
  TEMPORA_SOLVER_IPM = 1,
  TEMPORA_SOLVER_ADMM = 2,
} TemporaSolver;

typedef enum TemporaStatus {
  TEMPORA_STATUS_OK = 0,
  TEMPORA_STATUS_NULL_POINTER = 1,
  TEMPORA_STATUS_INVALID_STRING = 2,
  TEMPORA_STATUS_INVALID_INPUT = 3,
  TEMPORA_STATUS_NUMERICAL = 4,
  TEMPORA_STATUS_PANIC = 5,
} TemporaStatus;

typedef struct TemporaBound TemporaBound;

typedef struct TemporaRealization TemporaRealization;

typedef struct TemporaScenario TemporaScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *tempora_last_error(void);

// `s` must be null or a string returned by this library, not yet freed.
void tempora_string_free(char *s);

// Built-in scenario by name (`ncycle5`, `lg`, `yu-oh`, `gyni`, ...).
// `name` must be a nul-terminated string; `out` must be writable.
enum TemporaStatus tempora_scenario_builtin(const char *name, struct TemporaScenario **out);

// `path` must be a nul-terminated string; `out` must be writable.
enum TemporaStatus tempora_scenario_load(const char *path, struct TemporaScenario **out);

// `json` must be a nul-terminated string; `out` must be writable.
enum TemporaStatus tempora_scenario_from_json(const char *json, struct TemporaScenario **out);

// `s` must be null or a handle from a `tempora_scenario_*` constructor, not yet freed.
void tempora_scenario_free(struct TemporaScenario *s);

// Number of settings, or 0 for a null handle.
// `s` must be null or a live scenario handle.
size_t tempora_scenario_num_settings(const struct TemporaScenario *s);

// Scenario as JSON in the file format accepted by [`tempora_scenario_load`].
// `s` must be a live scenario handle; `out` must be writable.
enum TemporaStatus tempora_scenario_to_json(const struct TemporaScenario *s, char **out);

// Maximum over memoryless deterministic assignments.
// `s` must be a live scenario handle; `out` must be writable.
enum TemporaStatus tempora_nchv_bound(const struct TemporaScenario *s, double *out);

// Maximum over deterministic strategies with memory.
// `s` must be a live scenario handle; `out` must be writable.
enum TemporaStatus tempora_algebraic_max(const struct TemporaScenario *s, double *out);

// Closed-form quantum bound of the canonical N-cycle expression.
// `out` must be writable.
enum TemporaStatus tempora_ncycle_bound(size_t n, double *out);

// Solves the quantum program. A non-positive `tol` or zero `max_iter`
// selects the solver default. A run that stops without converging still
// produces a handle; check [`tempora_bound_converged`].
// `s` must be a live scenario handle; `out` must be writable.
enum TemporaStatus tempora_bound(const struct TemporaScenario *s,
                                 enum TemporaMethod method,
                                 enum TemporaSolver solver,
                                 double tol,
                                 size_t max_iter,
                                 struct TemporaBound **out);

// `b` must be null or a handle from [`tempora_bound`], not yet freed.
void tempora_bound_free(struct TemporaBound *b);

// Primal objective value, or NaN for a null handle.
// `b` must be null or a live bound handle.
double tempora_bound_primal(const struct TemporaBound *b);

// Certified upper bound, or NaN for a null handle.
// `b` must be null or a live bound handle.
double tempora_bound_certified(const struct TemporaBound *b);

// 1 if the solver met its tolerance, 0 otherwise (including a null handle).
// `b` must be null or a live bound handle.
int tempora_bound_converged(const struct TemporaBound *b);

// `b` must be null or a live bound handle.
size_t tempora_bound_iterations(const struct TemporaBound *b);

// Full run report as JSON.
// `b` must be a live bound handle; `out` must be writable.
enum TemporaStatus tempora_bound_report_json(const struct TemporaBound *b, char **out);

// Explicit realization of a solved program, validated before it is returned.
// `b` must be a live bound handle; `out` must be writable.
enum TemporaStatus tempora_realize(const struct TemporaBound *b, struct TemporaRealization **out);

// `path` must be a nul-terminated string; `out` must be writable.
enum TemporaStatus tempora_realization_load(const char *path, struct TemporaRealization **out);

// `r` must be null or a realization handle, not yet freed.
void tempora_realization_free(struct TemporaRealization *r);

// Hilbert-space dimension, or 0 for a null handle.
// `r` must be null or a live realization handle.
size_t tempora_realization_dimension(const struct TemporaRealization *r);

// Objective of `s` evaluated by simulating sequential measurements on `r`.
// `r` and `s` must be live handles; `out` must be writable.
enum TemporaStatus tempora_realization_objective(const struct TemporaRealization *r,
                                                 const struct TemporaScenario *s,
                                                 double *out);

// `r` must be a live realization handle; `path` a nul-terminated string.
enum TemporaStatus tempora_realization_save(const struct TemporaRealization *r, const char *path);

// 1 if `(q12, q13, q23)` is a quantum-achievable three-time point, 0 if not,
// −1 for an invalid point.
int tempora_lg_quantum_member(double q12, double q13, double q23, double tol);

// 1 if `(q12, q13, q23)` lies in the macrorealist tetrahedron, 0 if not,
// −1 for an invalid point.
int tempora_lg_classical_member(double q12, double q13, double q23, double tol);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TEMPORA_H */
