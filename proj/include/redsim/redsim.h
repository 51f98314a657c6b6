/*
 * C interface to the reduction simulator.
 *
 * Objects are opaque handles created by *_load / *_run functions and
 * released with the matching *_free. Every fallible call returns an
 * rs_status; on failure rs_last_error() describes the problem (the message
 * is thread-local and valid until the next failing call on that thread).
 */
#ifndef REDSIM_REDSIM_H
#define REDSIM_REDSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(REDSIM_BUILDING_LIBRARY)
#    define RS_API __declspec(dllexport)
#  else
#    define RS_API __declspec(dllimport)
#  endif
#else
#  define RS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_ARGUMENT = 1,     /* null handle, bad override, bad precondition */
  RS_ERR_PARSE = 2,        /* malformed scenario text */
  RS_ERR_VALIDATION = 3,   /* scenario describes a non-runnable graph */
  RS_ERR_NUMERIC = 4,      /* non-finite modulus, zero total, step too large */
  RS_ERR_INCOMPARABLE = 5, /* ensembles with different endpoint supports */
  RS_ERR_IO = 6,
  RS_ERR_INTERNAL = 7
} rs_status;

typedef enum rs_termination {
  RS_ABSORBED = 0,
  RS_MAX_TIME = 1,
  RS_QUIESCENT = 2
} rs_termination;

typedef struct rs_scenario rs_scenario;
typedef struct rs_trajectory rs_trajectory;
typedef struct rs_ensemble rs_ensemble;
typedef struct rs_comparison rs_comparison;

typedef struct rs_hit_event {
  double time;
  size_t target;
  size_t src;
  size_t dst;
} rs_hit_event;

RS_API const char* rs_version(void);
RS_API const char* rs_last_error(void);

/* Scenarios ------------------------------------------------------------ */

RS_API rs_status rs_scenario_load(const char* path, rs_scenario** out);
RS_API rs_status rs_scenario_parse(const char* text, rs_scenario** out);
RS_API rs_status rs_scenario_clone(const rs_scenario* scenario, rs_scenario** out);
RS_API void rs_scenario_free(rs_scenario* scenario);

RS_API rs_status rs_scenario_set_rule4(rs_scenario* scenario, int enabled);
RS_API rs_status rs_scenario_set_seed(rs_scenario* scenario, uint64_t seed);
RS_API rs_status rs_scenario_set_trajectories(rs_scenario* scenario, uint64_t n);
RS_API rs_status rs_scenario_set_output_dir(rs_scenario* scenario, const char* dir);
RS_API rs_status rs_scenario_set_traces(rs_scenario* scenario, int emit, int full);

RS_API size_t rs_scenario_component_count(const rs_scenario* scenario);
RS_API int rs_scenario_rule4(const rs_scenario* scenario);
RS_API uint64_t rs_scenario_seed(const rs_scenario* scenario);
RS_API uint64_t rs_scenario_trajectories(const rs_scenario* scenario);
RS_API double rs_scenario_dt(const rs_scenario* scenario);
RS_API double rs_scenario_max_time(const rs_scenario* scenario);
/* Returns a pointer owned by the scenario. */
RS_API const char* rs_scenario_output_dir(const rs_scenario* scenario);
RS_API int rs_scenario_emit_traces(const rs_scenario* scenario);

/* Scenario as explicit-graph text; release with rs_string_free. */
RS_API rs_status rs_scenario_emit(const rs_scenario* scenario, char** out_text);
RS_API void rs_string_free(char* text);

/* Single trajectories --------------------------------------------------- */

/* Runs trajectory `index` of the scenario's ensemble, recording the modulus
 * trace when record_trace is nonzero. */
RS_API rs_status rs_run_trajectory(const rs_scenario* scenario, uint64_t index,
                                   int record_trace, rs_trajectory** out);
RS_API void rs_trajectory_free(rs_trajectory* trajectory);

RS_API size_t rs_trajectory_event_count(const rs_trajectory* trajectory);
RS_API rs_status rs_trajectory_event(const rs_trajectory* trajectory, size_t i,
                                     rs_hit_event* out);
RS_API size_t rs_trajectory_visit_count(const rs_trajectory* trajectory);
RS_API rs_status rs_trajectory_visit(const rs_trajectory* trajectory, size_t i,
                                     size_t* out);
RS_API rs_termination rs_trajectory_termination(const rs_trajectory* trajectory);
RS_API double rs_trajectory_end_time(const rs_trajectory* trajectory);

RS_API rs_status rs_trajectory_write_events(const rs_trajectory* trajectory,
                                            const char* path);
/* Fails with RS_ERR_ARGUMENT if the trace was not recorded. */
RS_API rs_status rs_trajectory_write_trace(const rs_trajectory* trajectory,
                                           const char* path, int full);

/* Ensembles ------------------------------------------------------------- */

/* threads = 0 picks REDUCTION_SIM_THREADS or the hardware concurrency. */
RS_API rs_status rs_run_ensemble(const rs_scenario* scenario, size_t threads,
                                 rs_ensemble** out);
RS_API void rs_ensemble_free(rs_ensemble* ensemble);

RS_API uint64_t rs_ensemble_trajectories(const rs_ensemble* ensemble);
RS_API uint64_t rs_ensemble_skip_count(const rs_ensemble* ensemble);
RS_API uint64_t rs_ensemble_absorbed(const rs_ensemble* ensemble);
RS_API uint64_t rs_ensemble_failures(const rs_ensemble* ensemble);
RS_API uint64_t rs_ensemble_mask_violations(const rs_ensemble* ensemble);
RS_API uint64_t rs_ensemble_first_hits(const rs_ensemble* ensemble, size_t component);
/* Diamond path counts; all zero for other topologies. Returns 1 if the
 * ensemble carries path counts. */
RS_API int rs_ensemble_paths(const rs_ensemble* ensemble, uint64_t* clockwise,
                             uint64_t* counterclockwise, uint64_t* direct);
RS_API rs_status rs_ensemble_write_report(const rs_ensemble* ensemble,
                                          const char* path);

/* Comparison ------------------------------------------------------------ */

RS_API rs_status rs_compare(const rs_ensemble* a, const rs_ensemble* b,
                            rs_comparison** out);
RS_API void rs_comparison_free(rs_comparison* comparison);
RS_API int rs_comparison_discrepancy(const rs_comparison* comparison);
RS_API double rs_comparison_endpoint_tv(const rs_comparison* comparison);
RS_API double rs_comparison_max_abs_z(const rs_comparison* comparison);
RS_API int rs_comparison_visit_order_differs(const rs_comparison* comparison);
RS_API rs_status rs_comparison_write_report(const rs_comparison* comparison,
                                            const char* label_a,
                                            const char* label_b,
                                            const char* path);

/* Oracle ---------------------------------------------------------------- */

/* First-hit probabilities from the scenario's initial state under its rule-4
 * setting. `probabilities` must hold rs_scenario_component_count entries. */
RS_API rs_status rs_first_hit_oracle(const rs_scenario* scenario, double horizon,
                                     double dt, double* probabilities,
                                     double* survival);
/* Same distribution as key = value text; release with rs_string_free. */
RS_API rs_status rs_first_hit_oracle_text(const rs_scenario* scenario,
                                          double horizon, double dt,
                                          char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* REDSIM_REDSIM_H */
