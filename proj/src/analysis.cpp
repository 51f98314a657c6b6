#include "redsim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <set>
#include <thread>

#include "redsim/error.hpp"
#include "redsim/scenarios.hpp"

namespace redsim {

std::string signature(const VisitSequence& seq) {
  std::string out;
  for (auto c : seq) {
    if (!out.empty()) out += '>';
    out += std::to_string(c);
  }
  return out;
}

bool has_skip(const CouplingGraph& graph, const VisitSequence& seq) {
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const bool coupled = std::any_of(
        graph.edges.begin(), graph.edges.end(), [&](const Edge& e) {
          return e.src == seq[i - 1] && e.dst == seq[i];
        });
    if (!coupled) return true;
  }
  return false;
}

std::size_t audit_mask(const CouplingGraph& graph, const Trajectory& trajectory,
                       bool rule4_enabled) {
  std::size_t violations = 0;
  auto conscious = initial_conscious_map(graph);
  for (const auto& hit : trajectory.events) {
    auto it = std::find_if(graph.edges.begin(), graph.edges.end(),
                           [&](const Edge& e) {
                             return e.src == hit.src && e.dst == hit.dst;
                           });
    if (it == graph.edges.end() || hit.target != hit.dst ||
        (rule4_enabled && !rule4_allowed(graph, *it, conscious))) {
      ++violations;
    }
    move_consciousness(graph, conscious, hit.target);
  }
  return violations;
}

std::size_t resolve_thread_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("REDUCTION_SIM_THREADS")) {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleStats run_ensemble(const CouplingGraph& graph, const RunConfig& config,
                           std::size_t n, std::size_t threads) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "ensemble needs n >= 1");
  require_valid(graph);
  check_run_config(config);

  struct Outcome {
    std::optional<Trajectory> trajectory;
    std::string error;
  };
  std::vector<Outcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        outcomes[i].trajectory = run_trajectory(graph, config, i);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  const auto workers = std::min(resolve_thread_count(threads), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  EnsembleStats stats;
  stats.component_count = graph.components.size();
  for (ComponentIndex c = 0; c < graph.components.size(); ++c) {
    if (graph.components[c].terminal) stats.terminal_components.push_back(c);
  }
  stats.rule4_enabled = config.rule4_enabled;
  stats.seed = config.seed;
  stats.first_hit_counts.assign(graph.components.size(), 0);
  if (graph.topology == Topology::ParallelDiamond) stats.path_counts.emplace();

  double absorption_time_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& outcome = outcomes[i];
    if (!outcome.trajectory) {
      ++stats.failure_count;
      if (stats.failures.size() < 10) {
        stats.failures.push_back(std::to_string(i) + ": " + outcome.error);
      }
      continue;
    }
    const auto& traj = *outcome.trajectory;
    const auto& seq = traj.visit_sequence;
    ++stats.n_trajectories;
    ++stats.visit_order_histogram[seq];
    if (has_skip(graph, seq)) ++stats.skip_count;
    stats.mask_violations += audit_mask(graph, traj, config.rule4_enabled);
    if (traj.events.empty()) {
      ++stats.no_hit_count;
    } else {
      ++stats.first_hit_counts[traj.events.front().target];
    }
    switch (traj.terminated) {
      case Termination::Absorbed:
        ++stats.absorption_count;
        ++stats.absorbed_at[seq.back()];
        absorption_time_sum += traj.end_time;
        break;
      case Termination::MaxTime:
        ++stats.max_time_count;
        break;
      case Termination::Quiescent:
        ++stats.quiescent_count;
        break;
    }
    if (stats.path_counts) {
      using D = DiamondIndex;
      const bool via_r = std::find(seq.begin(), seq.end(), D::right) != seq.end();
      const bool via_l = std::find(seq.begin(), seq.end(), D::left) != seq.end();
      const bool at_f = std::find(seq.begin(), seq.end(), D::final) != seq.end();
      if (via_r) ++stats.path_counts->clockwise;
      if (via_l) ++stats.path_counts->counterclockwise;
      if (at_f && !via_r && !via_l) ++stats.path_counts->direct;
    }
    outcome.trajectory.reset();
  }
  if (stats.absorption_count > 0) {
    stats.mean_absorption_time =
        absorption_time_sum / static_cast<double>(stats.absorption_count);
  }
  return stats;
}

double skip_rate(const EnsembleStats& stats) {
  if (stats.n_trajectories == 0) {
    throw Error(ErrorCode::InvalidArgument, "skip_rate of an empty ensemble");
  }
  return static_cast<double>(stats.skip_count) /
         static_cast<double>(stats.n_trajectories);
}

FirstHitDistribution first_hit_oracle(const CouplingGraph& graph,
                                      bool rule4_enabled, double horizon,
                                      double dt) {
  require_valid(graph);
  const auto n = graph.components.size();

  struct Coupling {
    ComponentIndex src;
    ComponentIndex dst;
    double k;
  };
  std::vector<Coupling> couplings;
  double k_min = 0.0;
  for (const auto& e : active_edges(graph, rule4_enabled)) {
    if (e.coupling.k <= 0.0) continue;
    couplings.push_back({e.src, e.dst, e.coupling.k});
    if (k_min == 0.0 || e.coupling.k < k_min) k_min = e.coupling.k;
  }
  const double k_max = max_coupling(graph);
  if (!(dt > 0.0) || (k_max > 0.0 && dt > 1e-4 / k_max * (1.0 + 1e-12))) {
    throw Error(ErrorCode::InvalidArgument, "oracle requires 0 < dt <= 1e-4/k_max");
  }
  if (k_min > 0.0 && horizon < 20.0 / k_min * (1.0 - 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "oracle requires horizon >= 20/k_min");
  }

  // y = [moduli | cumulative first-hit probability per component]
  std::vector<double> y(2 * n, 0.0);
  y[initial_component(graph)] = 1.0;
  const double total = 1.0;
  auto rhs = [&](const std::vector<double>& in, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& c : couplings) {
      const double j = c.k * in[c.src];
      out[c.src] -= j;
      out[c.dst] += j;
      out[n + c.dst] += j / total;
    }
  };

  FirstHitDistribution result;
  result.horizon = horizon;
  result.dt = dt;
  result.exhausted_at = horizon;
  std::vector<double> d1(2 * n), d2(2 * n), d3(2 * n), d4(2 * n), probe(2 * n);
  double hit_mass = 0.0;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  for (std::size_t s = 0; s < steps && !couplings.empty(); ++s) {
    const double h = std::min(dt, horizon - static_cast<double>(s) * dt);
    rhs(y, d1);
    for (std::size_t i = 0; i < 2 * n; ++i) probe[i] = y[i] + 0.5 * h * d1[i];
    rhs(probe, d2);
    for (std::size_t i = 0; i < 2 * n; ++i) probe[i] = y[i] + 0.5 * h * d2[i];
    rhs(probe, d3);
    for (std::size_t i = 0; i < 2 * n; ++i) probe[i] = y[i] + h * d3[i];
    rhs(probe, d4);
    double step_mass = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      d1[i] = h / 6.0 * (d1[i] + 2.0 * d2[i] + 2.0 * d3[i] + d4[i]);
      if (i >= n) step_mass += d1[i];
    }
    if (hit_mass + step_mass >= 1.0) {
      // Hit probability runs out inside this step.
      const double frac = step_mass > 0.0 ? (1.0 - hit_mass) / step_mass : 0.0;
      for (std::size_t i = n; i < 2 * n; ++i) y[i] += frac * d1[i];
      hit_mass = 1.0;
      result.exhausted_at = static_cast<double>(s) * dt + frac * h;
      break;
    }
    for (std::size_t i = 0; i < 2 * n; ++i) y[i] += d1[i];
    hit_mass += step_mass;
  }
  result.probability.assign(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
  result.survival = std::max(0.0, 1.0 - hit_mass);
  return result;
}

double two_proportion_z(std::size_t count_a, std::size_t n_a,
                        std::size_t count_b, std::size_t n_b) {
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  const double pa = static_cast<double>(count_a) / na;
  const double pb = static_cast<double>(count_b) / nb;
  const double pooled = static_cast<double>(count_a + count_b) / (na + nb);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb));
  if (se == 0.0) return 0.0;
  return (pa - pb) / se;
}

namespace {

CellComparison make_cell(std::string name, std::size_t ca, std::size_t na,
                         std::size_t cb, std::size_t nb) {
  CellComparison cell;
  cell.cell = std::move(name);
  cell.count_a = ca;
  cell.count_b = cb;
  cell.p_a = static_cast<double>(ca) / static_cast<double>(na);
  cell.p_b = static_cast<double>(cb) / static_cast<double>(nb);
  cell.z = two_proportion_z(ca, na, cb, nb);
  return cell;
}

std::size_t lookup(const std::map<ComponentIndex, std::size_t>& m, ComponentIndex c) {
  auto it = m.find(c);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

ComparisonReport compare_statistics(const EnsembleStats& a,
                                    const EnsembleStats& b) {
  if (a.n_trajectories == 0 || b.n_trajectories == 0) {
    throw Error(ErrorCode::IncomparableStats, "cannot compare an empty ensemble");
  }
  if (a.component_count != b.component_count ||
      a.terminal_components != b.terminal_components) {
    throw Error(ErrorCode::IncomparableStats,
                "ensembles have different endpoint supports");
  }
  ComparisonReport report;
  report.n_a = a.n_trajectories;
  report.n_b = b.n_trajectories;
  const auto na = a.n_trajectories;
  const auto nb = b.n_trajectories;

  for (auto c : a.terminal_components) {
    report.endpoint_cells.push_back(make_cell("absorbed_at_" + std::to_string(c),
                                              lookup(a.absorbed_at, c), na,
                                              lookup(b.absorbed_at, c), nb));
  }
  report.endpoint_cells.push_back(make_cell("not_absorbed", na - a.absorption_count,
                                            na, nb - b.absorption_count, nb));
  for (const auto& cell : report.endpoint_cells) {
    report.endpoint_tv += 0.5 * std::abs(cell.p_a - cell.p_b);
    report.endpoint_max_abs_z = std::max(report.endpoint_max_abs_z, std::abs(cell.z));
  }
  report.endpoint_discrepancy = report.endpoint_max_abs_z > kDiscrepancyZ;

  std::set<VisitSequence> support;
  for (const auto& [seq, count] : a.visit_order_histogram) support.insert(seq);
  for (const auto& [seq, count] : b.visit_order_histogram) support.insert(seq);
  for (const auto& seq : support) {
    auto ia = a.visit_order_histogram.find(seq);
    auto ib = b.visit_order_histogram.find(seq);
    const auto ca = ia == a.visit_order_histogram.end() ? 0 : ia->second;
    const auto cb = ib == b.visit_order_histogram.end() ? 0 : ib->second;
    if (cb == 0) report.only_in_a.push_back(seq);
    if (ca == 0) report.only_in_b.push_back(seq);
    auto cell = make_cell(signature(seq), ca, na, cb, nb);
    report.visit_order_tv += 0.5 * std::abs(cell.p_a - cell.p_b);
    if (std::abs(cell.z) > kDiscrepancyZ) report.visit_order_differs = true;
    report.visit_order_cells.push_back(std::move(cell));
  }
  if (!report.only_in_a.empty() || !report.only_in_b.empty()) {
    report.visit_order_differs = true;
  }
  return report;
}

}  // namespace redsim
