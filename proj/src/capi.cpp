#include "redsim/redsim.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "redsim/analysis.hpp"
#include "redsim/error.hpp"
#include "redsim/io.hpp"
#include "redsim/scenario_file.hpp"

struct rs_scenario {
  redsim::Scenario scenario;
  std::string output_dir;  // backing storage for rs_scenario_output_dir
};

struct rs_trajectory {
  redsim::Trajectory trajectory;
  std::uint64_t index = 0;
  std::optional<redsim::TraceRecorder> trace;
};

struct rs_ensemble {
  redsim::EnsembleStats stats;
};

struct rs_comparison {
  redsim::ComparisonReport report;
};

namespace {

thread_local std::string last_error;

rs_status fail(rs_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

rs_status status_of(redsim::ErrorCode code) {
  using redsim::ErrorCode;
  switch (code) {
    case ErrorCode::Parse:
      return RS_ERR_PARSE;
    case ErrorCode::Validation:
    case ErrorCode::BadSpec:
      return RS_ERR_VALIDATION;
    case ErrorCode::NonFiniteModulus:
    case ErrorCode::ZeroTotalModulus:
    case ErrorCode::StepTooLarge:
      return RS_ERR_NUMERIC;
    case ErrorCode::IncomparableStats:
      return RS_ERR_INCOMPARABLE;
    case ErrorCode::Io:
      return RS_ERR_IO;
    case ErrorCode::InvalidArgument:
      return RS_ERR_ARGUMENT;
  }
  return RS_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
rs_status guarded(F&& body) {
  try {
    body();
    return RS_OK;
  } catch (const redsim::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RS_ERR_INTERNAL, "unknown error");
  }
}

rs_status null_argument(const char* what) {
  return fail(RS_ERR_ARGUMENT, std::string("null argument: ") + what);
}

std::ofstream open_output(const char* path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw redsim::Error(redsim::ErrorCode::Io, std::string("cannot write ") + path);
  return out;
}

void finish_output(std::ofstream& out, const char* path) {
  out.flush();
  if (!out) throw redsim::Error(redsim::ErrorCode::Io, std::string("write failed for ") + path);
}

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rs_scenario* wrap(redsim::Scenario s) {
  auto* h = new rs_scenario{std::move(s), {}};
  h->output_dir = h->scenario.config.output_dir.string();
  return h;
}

}  // namespace

extern "C" {

const char* rs_version(void) { return "1.0.0"; }

const char* rs_last_error(void) { return last_error.c_str(); }

rs_status rs_scenario_load(const char* path, rs_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = wrap(redsim::parse_scenario(path)); });
}

rs_status rs_scenario_parse(const char* text, rs_scenario** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  return guarded([&] { *out = wrap(redsim::parse_scenario_text(text)); });
}

rs_status rs_scenario_clone(const rs_scenario* scenario, rs_scenario** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new rs_scenario(*scenario); });
}

void rs_scenario_free(rs_scenario* scenario) { delete scenario; }

rs_status rs_scenario_set_rule4(rs_scenario* scenario, int enabled) {
  if (!scenario) return null_argument("scenario");
  scenario->scenario.config.rule4_enabled = enabled != 0;
  return RS_OK;
}

rs_status rs_scenario_set_seed(rs_scenario* scenario, uint64_t seed) {
  if (!scenario) return null_argument("scenario");
  scenario->scenario.config.seed = seed;
  return RS_OK;
}

rs_status rs_scenario_set_trajectories(rs_scenario* scenario, uint64_t n) {
  if (!scenario) return null_argument("scenario");
  if (n < 1) return fail(RS_ERR_ARGUMENT, "n_trajectories must be >= 1");
  scenario->scenario.config.n_trajectories = n;
  return RS_OK;
}

rs_status rs_scenario_set_output_dir(rs_scenario* scenario, const char* dir) {
  if (!scenario) return null_argument("scenario");
  if (!dir) return null_argument("dir");
  return guarded([&] {
    scenario->scenario.config.output_dir = dir;
    scenario->output_dir = dir;
  });
}

rs_status rs_scenario_set_traces(rs_scenario* scenario, int emit, int full) {
  if (!scenario) return null_argument("scenario");
  scenario->scenario.config.emit_traces = emit != 0;
  scenario->scenario.config.full_trace = full != 0;
  return RS_OK;
}

size_t rs_scenario_component_count(const rs_scenario* scenario) {
  return scenario ? scenario->scenario.graph.components.size() : 0;
}

int rs_scenario_rule4(const rs_scenario* scenario) {
  return scenario && scenario->scenario.config.rule4_enabled ? 1 : 0;
}

uint64_t rs_scenario_seed(const rs_scenario* scenario) {
  return scenario ? scenario->scenario.config.seed : 0;
}

uint64_t rs_scenario_trajectories(const rs_scenario* scenario) {
  return scenario ? scenario->scenario.config.n_trajectories : 0;
}

double rs_scenario_dt(const rs_scenario* scenario) {
  return scenario ? scenario->scenario.config.dt : 0.0;
}

double rs_scenario_max_time(const rs_scenario* scenario) {
  return scenario ? scenario->scenario.config.max_time : 0.0;
}

const char* rs_scenario_output_dir(const rs_scenario* scenario) {
  return scenario ? scenario->output_dir.c_str() : "";
}

int rs_scenario_emit_traces(const rs_scenario* scenario) {
  return scenario && scenario->scenario.config.emit_traces ? 1 : 0;
}

rs_status rs_scenario_emit(const rs_scenario* scenario, char** out_text) {
  if (!scenario) return null_argument("scenario");
  if (!out_text) return null_argument("out_text");
  return guarded([&] { *out_text = copy_string(redsim::emit_scenario(scenario->scenario)); });
}

void rs_string_free(char* text) { std::free(text); }

rs_status rs_run_trajectory(const rs_scenario* scenario, uint64_t index,
                            int record_trace, rs_trajectory** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto h = std::make_unique<rs_trajectory>();
    h->index = index;
    if (record_trace) h->trace.emplace();
    h->trajectory = redsim::run_trajectory(scenario->scenario.graph, scenario->scenario.config,
                                           index, h->trace ? &*h->trace : nullptr);
    *out = h.release();
  });
}

void rs_trajectory_free(rs_trajectory* trajectory) { delete trajectory; }

size_t rs_trajectory_event_count(const rs_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.events.size() : 0;
}

rs_status rs_trajectory_event(const rs_trajectory* trajectory, size_t i,
                              rs_hit_event* out) {
  if (!trajectory) return null_argument("trajectory");
  if (!out) return null_argument("out");
  const auto& events = trajectory->trajectory.events;
  if (i >= events.size()) return fail(RS_ERR_ARGUMENT, "event index out of range");
  const auto& e = events[i];
  *out = rs_hit_event{e.time, e.target, e.src, e.dst};
  return RS_OK;
}

size_t rs_trajectory_visit_count(const rs_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.visit_sequence.size() : 0;
}

rs_status rs_trajectory_visit(const rs_trajectory* trajectory, size_t i, size_t* out) {
  if (!trajectory) return null_argument("trajectory");
  if (!out) return null_argument("out");
  const auto& seq = trajectory->trajectory.visit_sequence;
  if (i >= seq.size()) return fail(RS_ERR_ARGUMENT, "visit index out of range");
  *out = seq[i];
  return RS_OK;
}

rs_termination rs_trajectory_termination(const rs_trajectory* trajectory) {
  if (!trajectory) return RS_MAX_TIME;
  switch (trajectory->trajectory.terminated) {
    case redsim::Termination::Absorbed:
      return RS_ABSORBED;
    case redsim::Termination::Quiescent:
      return RS_QUIESCENT;
    case redsim::Termination::MaxTime:
      break;
  }
  return RS_MAX_TIME;
}

double rs_trajectory_end_time(const rs_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.end_time : 0.0;
}

rs_status rs_trajectory_write_events(const rs_trajectory* trajectory, const char* path) {
  if (!trajectory) return null_argument("trajectory");
  if (!path) return null_argument("path");
  return guarded([&] {
    auto out = open_output(path);
    redsim::write_event_header(out);
    redsim::write_event_rows(out, trajectory->index, trajectory->trajectory);
    finish_output(out, path);
  });
}

rs_status rs_trajectory_write_trace(const rs_trajectory* trajectory, const char* path,
                                    int full) {
  if (!trajectory) return null_argument("trajectory");
  if (!path) return null_argument("path");
  if (!trajectory->trace) return fail(RS_ERR_ARGUMENT, "trajectory was run without a trace");
  return guarded([&] {
    auto out = open_output(path);
    redsim::write_trace_csv(out, *trajectory->trace, full != 0);
    finish_output(out, path);
  });
}

rs_status rs_run_ensemble(const rs_scenario* scenario, size_t threads, rs_ensemble** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& s = scenario->scenario;
    *out = new rs_ensemble{
        redsim::run_ensemble(s.graph, s.config, s.config.n_trajectories, threads)};
  });
}

void rs_ensemble_free(rs_ensemble* ensemble) { delete ensemble; }

uint64_t rs_ensemble_trajectories(const rs_ensemble* ensemble) {
  return ensemble ? ensemble->stats.n_trajectories : 0;
}

uint64_t rs_ensemble_skip_count(const rs_ensemble* ensemble) {
  return ensemble ? ensemble->stats.skip_count : 0;
}

uint64_t rs_ensemble_absorbed(const rs_ensemble* ensemble) {
  return ensemble ? ensemble->stats.absorption_count : 0;
}

uint64_t rs_ensemble_failures(const rs_ensemble* ensemble) {
  return ensemble ? ensemble->stats.failure_count : 0;
}

uint64_t rs_ensemble_mask_violations(const rs_ensemble* ensemble) {
  return ensemble ? ensemble->stats.mask_violations : 0;
}

uint64_t rs_ensemble_first_hits(const rs_ensemble* ensemble, size_t component) {
  if (!ensemble || component >= ensemble->stats.first_hit_counts.size()) return 0;
  return ensemble->stats.first_hit_counts[component];
}

int rs_ensemble_paths(const rs_ensemble* ensemble, uint64_t* clockwise,
                      uint64_t* counterclockwise, uint64_t* direct) {
  redsim::PathCounts p;
  const bool has = ensemble && ensemble->stats.path_counts;
  if (has) p = *ensemble->stats.path_counts;
  if (clockwise) *clockwise = p.clockwise;
  if (counterclockwise) *counterclockwise = p.counterclockwise;
  if (direct) *direct = p.direct;
  return has ? 1 : 0;
}

rs_status rs_ensemble_write_report(const rs_ensemble* ensemble, const char* path) {
  if (!ensemble) return null_argument("ensemble");
  if (!path) return null_argument("path");
  return guarded([&] {
    auto out = open_output(path);
    redsim::write_stats_report(out, ensemble->stats);
    finish_output(out, path);
  });
}

rs_status rs_compare(const rs_ensemble* a, const rs_ensemble* b, rs_comparison** out) {
  if (!a || !b) return null_argument("ensemble");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new rs_comparison{redsim::compare_statistics(a->stats, b->stats)}; });
}

void rs_comparison_free(rs_comparison* comparison) { delete comparison; }

int rs_comparison_discrepancy(const rs_comparison* comparison) {
  return comparison && comparison->report.endpoint_discrepancy ? 1 : 0;
}

double rs_comparison_endpoint_tv(const rs_comparison* comparison) {
  return comparison ? comparison->report.endpoint_tv : 0.0;
}

double rs_comparison_max_abs_z(const rs_comparison* comparison) {
  return comparison ? comparison->report.endpoint_max_abs_z : 0.0;
}

int rs_comparison_visit_order_differs(const rs_comparison* comparison) {
  return comparison && comparison->report.visit_order_differs ? 1 : 0;
}

rs_status rs_comparison_write_report(const rs_comparison* comparison, const char* label_a,
                                     const char* label_b, const char* path) {
  if (!comparison) return null_argument("comparison");
  if (!path) return null_argument("path");
  return guarded([&] {
    auto out = open_output(path);
    redsim::write_comparison_report(out, comparison->report, label_a ? label_a : "a",
                                    label_b ? label_b : "b");
    finish_output(out, path);
  });
}

rs_status rs_first_hit_oracle(const rs_scenario* scenario, double horizon, double dt,
                              double* probabilities, double* survival) {
  if (!scenario) return null_argument("scenario");
  if (!probabilities) return null_argument("probabilities");
  return guarded([&] {
    const auto& s = scenario->scenario;
    auto dist = redsim::first_hit_oracle(s.graph, s.config.rule4_enabled, horizon, dt);
    std::copy(dist.probability.begin(), dist.probability.end(), probabilities);
    if (survival) *survival = dist.survival;
  });
}

rs_status rs_first_hit_oracle_text(const rs_scenario* scenario, double horizon, double dt,
                                   char** out_text) {
  if (!scenario) return null_argument("scenario");
  if (!out_text) return null_argument("out_text");
  return guarded([&] {
    const auto& s = scenario->scenario;
    auto dist = redsim::first_hit_oracle(s.graph, s.config.rule4_enabled, horizon, dt);
    std::ostringstream os;
    os << "rule4 = " << (s.config.rule4_enabled ? "on" : "off") << '\n';
    redsim::write_first_hit(os, dist);
    *out_text = copy_string(os.str());
  });
}

}  // extern "C"
