#pragma once

// Monte Carlo ensembles over trajectories, skip and path statistics, the
// rule-4 on/off endpoint comparison, and the quadrature first-hit oracle.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "redsim/dynamics.hpp"
#include "redsim/graph.hpp"

namespace redsim {

using VisitSequence = std::vector<ComponentIndex>;

// "0>1>2>3"
std::string signature(const VisitSequence& seq);

struct PathCounts {
  std::size_t clockwise = 0;
  std::size_t counterclockwise = 0;
  std::size_t direct = 0;

  friend bool operator==(const PathCounts&, const PathCounts&) = default;
};

struct EnsembleStats {
  // Completed trajectories; failed ones are only counted in failure_count.
  std::size_t n_trajectories = 0;
  std::size_t component_count = 0;
  std::vector<ComponentIndex> terminal_components;
  bool rule4_enabled = true;
  std::uint64_t seed = 0;

  std::map<VisitSequence, std::size_t> visit_order_histogram;
  std::size_t skip_count = 0;
  std::optional<PathCounts> path_counts;
  std::size_t absorption_count = 0;
  double mean_absorption_time = 0.0;
  std::map<ComponentIndex, std::size_t> absorbed_at;
  std::vector<std::size_t> first_hit_counts;
  std::size_t no_hit_count = 0;
  std::size_t max_time_count = 0;
  std::size_t quiescent_count = 0;
  std::size_t mask_violations = 0;

  std::size_t failure_count = 0;
  // First few failure messages, prefixed with the trajectory index.
  std::vector<std::string> failures;

  friend bool operator==(const EnsembleStats&, const EnsembleStats&) = default;
};

// A consecutive visit pair that is not a coupling in the graph.
bool has_skip(const CouplingGraph& graph, const VisitSequence& seq);

// Number of hits whose source edge is not a coupling, or (with rule 4 on)
// is masked under the conscious assignment in force at the time of the hit.
std::size_t audit_mask(const CouplingGraph& graph, const Trajectory& trajectory,
                       bool rule4_enabled);

// Worker count for ensembles: `requested` if nonzero, else the
// REDUCTION_SIM_THREADS environment variable if set and nonzero, else the
// hardware concurrency.
std::size_t resolve_thread_count(std::size_t requested);

// Runs trajectories 0..n-1 of (graph, config). Aggregation is in index
// order, so results do not depend on the thread count.
EnsembleStats run_ensemble(const CouplingGraph& graph, const RunConfig& config,
                           std::size_t n, std::size_t threads = 0);

double skip_rate(const EnsembleStats& stats);

struct FirstHitDistribution {
  std::vector<double> probability;
  // Probability of no hit by the horizon.
  double survival = 1.0;
  // Time at which the cumulative hit probability reached 1 (horizon if it
  // never did).
  double exhausted_at = 0.0;
  double horizon = 0.0;
  double dt = 0.0;
};

// First-hit probabilities from the initial state by integrating the moduli
// together with the cumulative per-target hit probabilities. Requires
// dt <= 1e-4 / k_max and horizon >= 20 / k_min over the active couplings.
FirstHitDistribution first_hit_oracle(const CouplingGraph& graph,
                                      bool rule4_enabled, double horizon,
                                      double dt);

struct CellComparison {
  std::string cell;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  double p_a = 0.0;
  double p_b = 0.0;
  double z = 0.0;
};

struct ComparisonReport {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  // Endpoint marginals: absorbed at each terminal component, or not absorbed.
  std::vector<CellComparison> endpoint_cells;
  double endpoint_tv = 0.0;
  double endpoint_max_abs_z = 0.0;
  bool endpoint_discrepancy = false;

  std::vector<CellComparison> visit_order_cells;
  double visit_order_tv = 0.0;
  bool visit_order_differs = false;
  std::vector<VisitSequence> only_in_a;
  std::vector<VisitSequence> only_in_b;
};

inline constexpr double kDiscrepancyZ = 3.0;

// Two-proportion z statistic with pooled variance; 0 when both proportions
// are identical and degenerate.
double two_proportion_z(std::size_t count_a, std::size_t n_a,
                        std::size_t count_b, std::size_t n_b);

// Throws Error(IncomparableStats) if the two ensembles do not share a
// component count and terminal set, or either is empty.
ComparisonReport compare_statistics(const EnsembleStats& a,
                                    const EnsembleStats& b);

}  // namespace redsim
