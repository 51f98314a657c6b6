#pragma once

// Square-moduli flow along active couplings, rule-(1) hit sampling and
// rule-(3) reduction.
//
// Hit semantics: hazard(c) = (current into c) / (total modulus) is the
// probability per unit time of a hit on c, measured from the last reduction.
// Its time integral is a probability, so a trajectory keeps the remaining
// unhit probability U = 1 - sum_c int hazard(c) dt and, per step, fires
// target c with probability hazard(c) dt / U. A lone target fed by a source
// that drains completely is therefore hit with certainty.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "redsim/graph.hpp"
#include "redsim/rng.hpp"

namespace redsim {

struct RunConfig {
  double dt = 1e-3;
  double max_time = 50.0;
  std::uint64_t seed = 42;
  bool rule4_enabled = true;
  std::size_t n_trajectories = 1000;
  bool emit_traces = false;
  bool full_trace = false;
  std::filesystem::path output_dir = ".";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Defaults documented for scenario files: dt = 1e-3/k_max,
// max_time = 50/k_min (positive couplings only).
RunConfig default_run_config(const CouplingGraph& graph);

// Throws InvalidArgument unless dt > 0, max_time > dt, n_trajectories >= 1.
void check_run_config(const RunConfig& config);

struct TrajectoryState {
  std::vector<double> moduli;
  double time = 0.0;
  ConsciousMap conscious_at;
  // Component consciousness last moved to (or started in).
  ComponentIndex current = 0;
  // 1 - integral of the total hazard since the last reduction.
  double unhit_probability = 1.0;
  bool rule4_enabled = true;
  RandomStream rng;
  // Edge indices under the current rule-4 mask, sorted by (src, dst).
  std::vector<std::size_t> active;
  // Per-target hit probability integrated by the last step() alongside the
  // moduli; consumed by sample_hit.
  std::vector<double> step_hit_mass;
  bool step_hit_pending = false;
};

// Initial state: unit modulus on the initially conscious component.
TrajectoryState make_state(const CouplingGraph& graph, bool rule4_enabled,
                           std::uint64_t stream_seed);

struct HitEvent {
  double time = 0.0;
  ComponentIndex target = 0;
  ComponentIndex src = 0;
  ComponentIndex dst = 0;

  friend bool operator==(const HitEvent&, const HitEvent&) = default;
};

enum class Termination { Absorbed, MaxTime, Quiescent };

std::string_view to_string(Termination t);

struct Trajectory {
  std::vector<HitEvent> events;
  std::vector<ComponentIndex> visit_sequence;
  Termination terminated = Termination::MaxTime;
  double end_time = 0.0;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Probability current carried by `edge`; 0 when the edge is masked in the
// state's rule-4 view.
double current(const CouplingGraph& graph, const Edge& edge,
               const TrajectoryState& state);

// One RK4 step of dm/dt = inflow - outflow over the active edges.
void step(TrajectoryState& state, const CouplingGraph& graph, double dt);

double total_modulus(const TrajectoryState& state);

double hazard(const TrajectoryState& state, const CouplingGraph& graph,
              ComponentIndex target);

// Hit sampling for the step just taken. Consumes unhit probability whether
// or not a hit fires. Throws StepTooLarge if sum(hazard) * dt >= 0.1.
std::optional<HitEvent> sample_hit(TrajectoryState& state,
                                   const CouplingGraph& graph, double dt);

// Rule (3): zero every component but the target (its modulus is kept, not
// renormalized) and move consciousness of observers that are ready there.
void reduce(TrajectoryState& state, const CouplingGraph& graph,
            const HitEvent& hit);

// Modulus time series of a single run: one row per step.
struct TraceRecorder {
  std::vector<double> times;
  std::vector<std::vector<double>> moduli;

  void record(const TrajectoryState& state);
};

// Runs trajectory `index` of the ensemble defined by (graph, config). The
// random stream is stream_seed(config.seed, index).
Trajectory run_trajectory(const CouplingGraph& graph, const RunConfig& config,
                          std::uint64_t index = 0,
                          TraceRecorder* trace = nullptr);

}  // namespace redsim
