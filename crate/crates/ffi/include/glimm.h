#ifndef GLIMM_H
#define GLIMM_H

#include <stddef.h>
#include <stdint.h>

typedef enum GlimmRateKind {
  GLIMM_RATE_KIND_CONSTANT = 0,
  GLIMM_RATE_KIND_ARRHENIUS = 1,
  GLIMM_RATE_KIND_AFFINE_FLOOR = 2,
} GlimmRateKind;

// Result codes. The numeric values of `Io`, `Config` and `Numerical`
// match the exit codes of the command line tool.
typedef enum GlimmStatus {
  GLIMM_STATUS_OK = 0,
  GLIMM_STATUS_IO = 1,
  GLIMM_STATUS_CONFIG = 2,
  GLIMM_STATUS_NUMERICAL = 3,
  GLIMM_STATUS_NULL_POINTER = 4,
  GLIMM_STATUS_INVALID_ARGUMENT = 5,
  GLIMM_STATUS_PANIC = 6,
} GlimmStatus;

// Completed run.
typedef struct GlimmRun GlimmRun;

typedef struct GlimmGas {
  double gamma;
  double r_gas;
  double q_heat;
} GlimmGas;

// Primitive state `(u, v, p, rho, z)`.
typedef struct GlimmState {
  double u;
  double v;
  double p;
  double rho;
  double z;
} GlimmState;

// Riemann fan: five strengths and the six states between the waves,
// bottom first. `has_strong` is 1 when a tracked strong 1-shock of slope
// `strong_slope` replaces the first wave.
typedef struct GlimmFan {
  double strengths[5];
  struct GlimmState states[6];
  int32_t has_strong;
  double strong_slope;
} GlimmFan;

// Reaction rate. `Constant` uses `a` as the value; `Arrhenius` uses `a`
// as the temperature exponent and `b` as the activation energy;
// `AffineFloor` uses `a` as the slope and `b` as the floor.
typedef struct GlimmRate {
  enum GlimmRateKind kind;
  double a;
  double b;
} GlimmRate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *glimm_version(void);

// Message of the last failure on this thread, or an empty string. Valid
// until the next failing call on the same thread.
const char *glimm_last_error(void);

// Solves the interior Riemann problem between `below` and `above`.
//
// # Safety
// All pointers must be valid for the duration of the call.
enum GlimmStatus glimm_solve_interior(const struct GlimmGas *gas,
                                      const struct GlimmState *below,
                                      const struct GlimmState *above,
                                      struct GlimmFan *out);

// Turns `state` along a wall of direction `wall_angle` (radians). With
// `wall_above` non-zero the fluid lies below the wall.
//
// # Safety
// All pointers must be valid for the duration of the call.
enum GlimmStatus glimm_solve_lateral(const struct GlimmGas *gas,
                                     const struct GlimmState *state,
                                     double wall_angle,
                                     int32_t wall_above,
                                     struct GlimmFan *out);

// Applies one reaction step of length `tau`.
//
// # Safety
// All pointers must be valid for the duration of the call.
enum GlimmStatus glimm_react(const struct GlimmGas *gas,
                             const struct GlimmRate *rate,
                             const struct GlimmState *state,
                             double tau,
                             struct GlimmState *out);

// Parses the TOML configuration `config` (a cauchy or wedge mode) and
// runs it to completion. On success `*out` owns a handle to release with
// [`glimm_run_free`].
//
// # Safety
// `config` must be a NUL-terminated string and `out` a valid pointer.
enum GlimmStatus glimm_run_new(const char *config, struct GlimmRun **out);

// Releases a run. Null is ignored.
//
// # Safety
// `run` must come from [`glimm_run_new`] and not be used afterwards.
void glimm_run_free(struct GlimmRun *run);

// Number of strips marched, or 0 for a null handle.
//
// # Safety
// `run` must be null or a live handle.
size_t glimm_run_strips(const struct GlimmRun *run);

// Run summary as JSON, owned by the handle.
//
// # Safety
// `run` must be null or a live handle.
const char *glimm_run_summary_json(const struct GlimmRun *run);

// Per-strip diagnostics table as CSV, owned by the handle.
//
// # Safety
// `run` must be null or a live handle.
const char *glimm_run_diagnostics_csv(const struct GlimmRun *run);

// Field table as CSV (strips selected by `output.field_stride`), owned by
// the handle.
//
// # Safety
// `run` must be null or a live handle.
const char *glimm_run_field_csv(const struct GlimmRun *run);

// Copies the cell states of the last strip, bottom first, into `buf`.
// `*len` receives the cell count; `GLIMM_STATUS_INVALID_ARGUMENT` is
// returned when `cap` is smaller.
//
// # Safety
// `buf` must hold `cap` states; `run` and `len` must be valid.
enum GlimmStatus glimm_run_last_states(const struct GlimmRun *run,
                                       struct GlimmState *buf,
                                       size_t cap,
                                       size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GLIMM_H */
