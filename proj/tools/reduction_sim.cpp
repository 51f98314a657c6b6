// reduction-sim: scenario-file front end over the C API.
//
//   reduction-sim run|ensemble|compare|oracle <scenario-file>
//       [--rule4 on|off] [--seed N] [--n N] [--out DIR] [--strict]
//       [--trace] [--full-trace] [--horizon T] [--dt DT]
//
// Exit status: 0 success, 1 usage error, 2 parse/validation error,
// 3 statistical check failed (compare --strict), 4 runtime or I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "redsim/redsim.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitStatistics = 3;
constexpr int kExitRuntime = 4;

struct Options {
  std::string command;
  std::string scenario_file;
  std::optional<std::string> rule4;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n;
  std::optional<std::string> out;
  bool strict = false;
  bool trace = false;
  bool full_trace = false;
  std::optional<double> horizon;
  std::optional<double> dt;
};

struct ScenarioDeleter {
  void operator()(rs_scenario* s) const { rs_scenario_free(s); }
};
struct TrajectoryDeleter {
  void operator()(rs_trajectory* t) const { rs_trajectory_free(t); }
};
struct EnsembleDeleter {
  void operator()(rs_ensemble* e) const { rs_ensemble_free(e); }
};
struct ComparisonDeleter {
  void operator()(rs_comparison* c) const { rs_comparison_free(c); }
};
using ScenarioPtr = std::unique_ptr<rs_scenario, ScenarioDeleter>;
using TrajectoryPtr = std::unique_ptr<rs_trajectory, TrajectoryDeleter>;
using EnsemblePtr = std::unique_ptr<rs_ensemble, EnsembleDeleter>;
using ComparisonPtr = std::unique_ptr<rs_comparison, ComparisonDeleter>;

class Failure {
 public:
  explicit Failure(int code) : code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

void check(rs_status status) {
  if (status == RS_OK) return;
  std::cerr << "reduction-sim: " << rs_last_error() << '\n';
  switch (status) {
    case RS_ERR_PARSE:
    case RS_ERR_VALIDATION:
      throw Failure(kExitInvalid);
    case RS_ERR_ARGUMENT:
      throw Failure(kExitUsage);
    default:
      throw Failure(kExitRuntime);
  }
}

std::filesystem::path output_dir(const rs_scenario* scenario) {
  std::filesystem::path dir = rs_scenario_output_dir(scenario);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "reduction-sim: cannot create " << dir << ": " << ec.message() << '\n';
    throw Failure(kExitRuntime);
  }
  return dir;
}

ScenarioPtr load(const Options& opt) {
  rs_scenario* raw = nullptr;
  check(rs_scenario_load(opt.scenario_file.c_str(), &raw));
  ScenarioPtr scenario(raw);
  if (opt.rule4) check(rs_scenario_set_rule4(scenario.get(), *opt.rule4 == "on"));
  if (opt.seed) check(rs_scenario_set_seed(scenario.get(), *opt.seed));
  if (opt.n) check(rs_scenario_set_trajectories(scenario.get(), *opt.n));
  if (opt.out) check(rs_scenario_set_output_dir(scenario.get(), opt.out->c_str()));
  if (opt.trace || opt.full_trace) {
    check(rs_scenario_set_traces(scenario.get(), 1, opt.full_trace));
  }
  return scenario;
}

int cmd_run(const Options& opt) {
  auto scenario = load(opt);
  const bool traces = rs_scenario_emit_traces(scenario.get()) != 0;
  rs_trajectory* raw = nullptr;
  check(rs_run_trajectory(scenario.get(), 0, traces, &raw));
  TrajectoryPtr traj(raw);

  const auto dir = output_dir(scenario.get());
  const auto events = (dir / "events.csv").string();
  check(rs_trajectory_write_events(traj.get(), events.c_str()));
  std::cout << "events: " << events << '\n';
  if (traces) {
    const auto trace = (dir / "trace.csv").string();
    check(rs_trajectory_write_trace(traj.get(), trace.c_str(), opt.full_trace));
    std::cout << "trace: " << trace << '\n';
  }

  std::cout << "visit_sequence:";
  for (size_t i = 0; i < rs_trajectory_visit_count(traj.get()); ++i) {
    size_t c = 0;
    check(rs_trajectory_visit(traj.get(), i, &c));
    std::cout << ' ' << c;
  }
  static const char* names[] = {"absorbed", "max_time", "quiescent"};
  std::cout << "\nterminated: " << names[rs_trajectory_termination(traj.get())]
            << " at t = " << rs_trajectory_end_time(traj.get()) << '\n';
  return 0;
}

EnsemblePtr ensemble(const rs_scenario* scenario) {
  rs_ensemble* raw = nullptr;
  check(rs_run_ensemble(scenario, 0, &raw));
  return EnsemblePtr(raw);
}

void summarize(const char* label, const rs_ensemble* e) {
  std::cout << label << "trajectories = " << rs_ensemble_trajectories(e)
            << ", absorbed = " << rs_ensemble_absorbed(e)
            << ", skips = " << rs_ensemble_skip_count(e)
            << ", failures = " << rs_ensemble_failures(e) << '\n';
  std::uint64_t cw = 0, ccw = 0, direct = 0;
  if (rs_ensemble_paths(e, &cw, &ccw, &direct)) {
    std::cout << label << "clockwise = " << cw << ", counterclockwise = " << ccw
              << ", direct = " << direct << '\n';
  }
}

int cmd_ensemble(const Options& opt) {
  auto scenario = load(opt);
  auto stats = ensemble(scenario.get());
  const auto report = (output_dir(scenario.get()) / "report.txt").string();
  check(rs_ensemble_write_report(stats.get(), report.c_str()));
  summarize("", stats.get());
  std::cout << "report: " << report << '\n';
  return 0;
}

int cmd_compare(const Options& opt) {
  auto on = load(opt);
  rs_scenario* raw = nullptr;
  check(rs_scenario_clone(on.get(), &raw));
  ScenarioPtr off(raw);
  check(rs_scenario_set_rule4(on.get(), 1));
  check(rs_scenario_set_rule4(off.get(), 0));

  auto stats_on = ensemble(on.get());
  auto stats_off = ensemble(off.get());
  rs_comparison* cmp_raw = nullptr;
  check(rs_compare(stats_on.get(), stats_off.get(), &cmp_raw));
  ComparisonPtr cmp(cmp_raw);

  const auto dir = output_dir(on.get());
  check(rs_ensemble_write_report(stats_on.get(), (dir / "report_rule4_on.txt").string().c_str()));
  check(rs_ensemble_write_report(stats_off.get(), (dir / "report_rule4_off.txt").string().c_str()));
  const auto path = (dir / "comparison.txt").string();
  check(rs_comparison_write_report(cmp.get(), "rule4=on", "rule4=off", path.c_str()));

  summarize("rule4 on:  ", stats_on.get());
  summarize("rule4 off: ", stats_off.get());
  std::cout << "endpoint max |z| = " << rs_comparison_max_abs_z(cmp.get())
            << ", endpoint TV = " << rs_comparison_endpoint_tv(cmp.get())
            << ", visit order differs = "
            << (rs_comparison_visit_order_differs(cmp.get()) ? "yes" : "no") << '\n';
  std::cout << "comparison: " << path << '\n';
  if (opt.strict && rs_comparison_discrepancy(cmp.get())) {
    std::cerr << "reduction-sim: endpoint statistics differ (|z| > 3)\n";
    return kExitStatistics;
  }
  return 0;
}

int cmd_oracle(const Options& opt) {
  auto scenario = load(opt);
  const double dt = opt.dt.value_or(rs_scenario_dt(scenario.get()) / 10.0);
  const double horizon = opt.horizon.value_or(rs_scenario_max_time(scenario.get()));
  char* text = nullptr;
  check(rs_first_hit_oracle_text(scenario.get(), horizon, dt, &text));
  std::cout << text;
  rs_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic state-reduction trajectory simulator", "reduction-sim"};
  Options opt;
  app.add_option("command", opt.command, "run | ensemble | compare | oracle")
      ->required()
      ->check(CLI::IsMember({"run", "ensemble", "compare", "oracle"}));
  app.add_option("scenario", opt.scenario_file, "scenario file")->required();
  app.add_option("--rule4", opt.rule4, "enable rule 4 (on|off)")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--seed", opt.seed, "master seed");
  app.add_option("--n", opt.n, "number of trajectories")->check(CLI::PositiveNumber);
  app.add_option("--out", opt.out, "output directory");
  app.add_flag("--strict", opt.strict, "compare: exit 3 on endpoint discrepancy");
  app.add_flag("--trace", opt.trace, "run: write the modulus trace CSV");
  app.add_flag("--full-trace", opt.full_trace, "run: trace without downsampling");
  app.add_option("--horizon", opt.horizon, "oracle: integration horizon");
  app.add_option("--dt", opt.dt, "oracle: quadrature step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (opt.command == "run") return cmd_run(opt);
    if (opt.command == "ensemble") return cmd_ensemble(opt);
    if (opt.command == "compare") return cmd_compare(opt);
    return cmd_oracle(opt);
  } catch (const Failure& f) {
    return f.code();
  }
}
