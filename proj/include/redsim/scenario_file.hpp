#pragma once

// Sectioned key-value scenario files.
//
//   # full-line comments start with '#'
//   [scenario]
//   kind = series_chain        # series_chain | parallel_diamond | hammer_chain | explicit
//   n = 4
//   k = 1.0                    # one rate, or a comma list of n-1 rates
//
//   [run]
//   dt = 0.001
//   max_time = 50
//   seed = 42
//   rule4 = on
//   n_trajectories = 1000
//   emit_traces = false
//   full_trace = false
//   output_dir = out
//
// parallel_diamond takes k_0r, k_0l, k_rf, k_lf (or a single k for all
// four); hammer_chain takes n_angles, k_decay, k_angle. `explicit` graphs
// list [component.i] sections (label, brain = "0:conscious,1:absent",
// terminal) and [edge.j] sections (src, dst, model = rate_linear, k), and may
// set `topology` and `observers` in [scenario]. Omitted [run] keys take the
// defaults of default_run_config.

#include <filesystem>
#include <string>
#include <string_view>

#include "redsim/dynamics.hpp"
#include "redsim/graph.hpp"

namespace redsim {

struct Scenario {
  CouplingGraph graph;
  RunConfig config;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Throws ParseError (with line/column) on malformed input and
// Error(Validation) when the described graph is not runnable.
Scenario parse_scenario_text(std::string_view text);
Scenario parse_scenario(const std::filesystem::path& file);

// Writes the scenario as an explicit graph; parse_scenario_text of the
// result reproduces the input exactly.
std::string emit_scenario(const Scenario& scenario);

}  // namespace redsim
