#include "redsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "redsim/error.hpp"

namespace redsim {
namespace {

constexpr double kMaxStepHitProbability = 0.1;
constexpr double kMaxClamp = 1e-9;
constexpr double kQuiescentCurrent = 1e-12;

// dm/dt for the rate-linear model over the given edge subset. Inflow per
// target is added to `inflow` scaled by `weight` (the RK4 stage weight).
void flow(const CouplingGraph& graph, const std::vector<std::size_t>& active,
          const std::vector<double>& m, std::vector<double>& out,
          std::vector<double>& inflow, double weight) {
  std::fill(out.begin(), out.end(), 0.0);
  for (auto idx : active) {
    const auto& e = graph.edges[idx];
    const double j = e.coupling.k * m[e.src];
    out[e.src] -= j;
    out[e.dst] += j;
    inflow[e.dst] += weight * j;
  }
}

double max_relative_current(const TrajectoryState& state,
                            const CouplingGraph& graph) {
  const double total = total_modulus(state);
  if (total <= 0.0) return 0.0;
  double j = 0.0;
  for (auto idx : state.active) {
    const auto& e = graph.edges[idx];
    j = std::max(j, e.coupling.k * state.moduli[e.src]);
  }
  return j / total;
}

}  // namespace

RunConfig default_run_config(const CouplingGraph& graph) {
  RunConfig config;
  const double k_max = max_coupling(graph);
  const double k_min = min_positive_coupling(graph);
  config.dt = k_max > 0.0 ? 1e-3 / k_max : 1e-3;
  config.max_time = k_min > 0.0 ? 50.0 / k_min : 50.0;
  return config;
}

void check_run_config(const RunConfig& config) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
    throw Error(ErrorCode::InvalidArgument, "dt must be positive and finite");
  }
  if (!(config.max_time > config.dt)) {
    throw Error(ErrorCode::InvalidArgument, "max_time must exceed dt");
  }
  if (config.n_trajectories < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_trajectories must be >= 1");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Absorbed:
      return "absorbed";
    case Termination::MaxTime:
      return "max_time";
    case Termination::Quiescent:
      return "quiescent";
  }
  return "max_time";
}

TrajectoryState make_state(const CouplingGraph& graph, bool rule4_enabled,
                           std::uint64_t seed) {
  TrajectoryState state;
  state.moduli.assign(graph.components.size(), 0.0);
  state.conscious_at = initial_conscious_map(graph);
  state.current = initial_component(graph);
  if (!state.moduli.empty()) state.moduli[state.current] = 1.0;
  state.rule4_enabled = rule4_enabled;
  state.rng = RandomStream(seed);
  state.active = active_edge_indices(graph, rule4_enabled, state.conscious_at);
  return state;
}

double current(const CouplingGraph& graph, const Edge& edge,
               const TrajectoryState& state) {
  if (state.rule4_enabled && !rule4_allowed(graph, edge, state.conscious_at)) {
    return 0.0;
  }
  return edge.coupling.k * state.moduli[edge.src];
}

double total_modulus(const TrajectoryState& state) {
  double total = 0.0;
  for (double m : state.moduli) total += m;
  return total;
}

void step(TrajectoryState& state, const CouplingGraph& graph, double dt) {
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "step requires dt > 0");
  }
  thread_local std::vector<double> k1, k2, k3, k4, tmp;
  auto& m = state.moduli;
  const auto n = m.size();
  for (auto* v : {&k1, &k2, &k3, &k4, &tmp}) v->resize(n);
  auto& hit = state.step_hit_mass;
  hit.assign(n, 0.0);
  const double total = total_modulus(state);

  flow(graph, state.active, m, k1, hit, 1.0);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = m[i] + 0.5 * dt * k1[i];
  flow(graph, state.active, tmp, k2, hit, 2.0);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = m[i] + 0.5 * dt * k2[i];
  flow(graph, state.active, tmp, k3, hit, 2.0);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = m[i] + dt * k3[i];
  flow(graph, state.active, tmp, k4, hit, 1.0);
  // The total is invariant over the step, so the hazard integral is the
  // RK4-weighted inflow over the starting total.
  const double scale = total > 0.0 ? dt / (6.0 * total) : 0.0;
  for (auto& h : hit) h *= scale;
  state.step_hit_pending = true;

  // tmp <- proposed moduli, k1 <- per-component change over the step
  double deficit = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    k1[i] = dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    tmp[i] = m[i] + k1[i];
    if (!std::isfinite(tmp[i])) {
      throw Error(ErrorCode::NonFiniteModulus,
                  "modulus " + std::to_string(i) + " became non-finite");
    }
    if (tmp[i] < 0.0) {
      if (-tmp[i] > kMaxClamp) {
        throw Error(ErrorCode::StepTooLarge,
                    "integrator overshoot of " + std::to_string(-tmp[i]) +
                        " on component " + std::to_string(i) +
                        "; reduce dt");
      }
      deficit -= tmp[i];
      tmp[i] = 0.0;
    }
  }
  if (deficit > 0.0) {
    // Take the clamped amount back from the components that gained.
    double gained = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (k1[i] > 0.0 && tmp[i] > 0.0) gained += k1[i];
    }
    if (gained > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (k1[i] > 0.0 && tmp[i] > 0.0) {
          tmp[i] = std::max(0.0, tmp[i] - deficit * k1[i] / gained);
        }
      }
    }
  }
  m.swap(tmp);
  state.time += dt;
}

double hazard(const TrajectoryState& state, const CouplingGraph& graph,
              ComponentIndex target) {
  const double total = total_modulus(state);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::ZeroTotalModulus, "total modulus is zero");
  }
  double inflow = 0.0;
  for (auto idx : state.active) {
    const auto& e = graph.edges[idx];
    if (e.dst == target) inflow += e.coupling.k * state.moduli[e.src];
  }
  return inflow / total;
}

std::optional<HitEvent> sample_hit(TrajectoryState& state,
                                   const CouplingGraph& graph, double dt) {
  const double total = total_modulus(state);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::ZeroTotalModulus, "total modulus is zero");
  }
  thread_local std::vector<double> inflow;
  thread_local std::vector<ComponentIndex> targets;
  if (state.step_hit_pending) {
    // Hazard integral over the step just taken.
    inflow = state.step_hit_mass;
    state.step_hit_pending = false;
  } else {
    // No preceding step: rectangle rule at the current state.
    inflow.assign(state.moduli.size(), 0.0);
    for (auto idx : state.active) {
      const auto& e = graph.edges[idx];
      inflow[e.dst] += e.coupling.k * state.moduli[e.src] / total * dt;
    }
  }
  double step_probability = 0.0;
  for (double h : inflow) step_probability += h;
  if (step_probability >= kMaxStepHitProbability) {
    throw Error(ErrorCode::StepTooLarge,
                "sum of hazard * dt = " + std::to_string(step_probability) +
                    " exceeds 0.1; reduce dt");
  }
  if (!(step_probability > 0.0)) return std::nullopt;

  const double unhit = state.unhit_probability;
  const double fire = unhit > step_probability ? step_probability / unhit : 1.0;
  state.unhit_probability = std::max(0.0, unhit - step_probability);

  const double u = state.rng.uniform();
  if (u >= fire) return std::nullopt;

  targets.clear();
  for (ComponentIndex c = 0; c < inflow.size(); ++c) {
    if (inflow[c] > 0.0) targets.push_back(c);
  }
  for (std::size_t i = targets.size(); i > 1; --i) {
    std::swap(targets[i - 1], targets[state.rng.below(i)]);
  }
  // u / fire is uniform on [0, 1) given that a hit fired.
  const double threshold = u / fire * step_probability;
  ComponentIndex target = targets.back();
  double acc = 0.0;
  for (auto c : targets) {
    acc += inflow[c];
    if (threshold < acc) {
      target = c;
      break;
    }
  }

  // Attribute the hit to an inflow edge in proportion to its current.
  const Edge* source = nullptr;
  double target_current = 0.0;
  for (auto idx : state.active) {
    const auto& e = graph.edges[idx];
    if (e.dst == target) {
      target_current += e.coupling.k * state.moduli[e.src];
      if (!source) source = &e;
    }
  }
  const double pick = state.rng.uniform() * target_current;
  acc = 0.0;
  for (auto idx : state.active) {
    const auto& e = graph.edges[idx];
    if (e.dst != target) continue;
    const double j = e.coupling.k * state.moduli[e.src];
    if (j <= 0.0) continue;
    source = &e;
    acc += j;
    if (pick < acc) break;
  }
  return HitEvent{state.time, target, source->src, source->dst};
}

void reduce(TrajectoryState& state, const CouplingGraph& graph,
            const HitEvent& hit) {
  for (ComponentIndex i = 0; i < state.moduli.size(); ++i) {
    if (i != hit.target) state.moduli[i] = 0.0;
  }
  move_consciousness(graph, state.conscious_at, hit.target);
  state.current = hit.target;
  state.unhit_probability = 1.0;
  state.step_hit_pending = false;
  state.active =
      active_edge_indices(graph, state.rule4_enabled, state.conscious_at);
}

void TraceRecorder::record(const TrajectoryState& state) {
  times.push_back(state.time);
  moduli.push_back(state.moduli);
}

Trajectory run_trajectory(const CouplingGraph& graph, const RunConfig& config,
                          std::uint64_t index, TraceRecorder* trace) {
  require_valid(graph);
  check_run_config(config);

  auto state =
      make_state(graph, config.rule4_enabled, stream_seed(config.seed, index));
  Trajectory out;
  out.visit_sequence.push_back(state.current);
  if (trace) trace->record(state);

  auto finish = [&](Termination reason) {
    out.terminated = reason;
    out.end_time = state.time;
    return out;
  };
  if (graph.components[state.current].terminal) {
    return finish(Termination::Absorbed);
  }

  while (state.time < config.max_time) {
    const double before = max_relative_current(state, graph);
    step(state, graph, config.dt);
    if (auto hit = sample_hit(state, graph, config.dt)) {
      reduce(state, graph, *hit);
      out.events.push_back(*hit);
      out.visit_sequence.push_back(hit->target);
      if (trace) trace->record(state);
      if (graph.components[hit->target].terminal) {
        return finish(Termination::Absorbed);
      }
      continue;
    }
    if (trace) trace->record(state);
    if (before < kQuiescentCurrent &&
        max_relative_current(state, graph) < kQuiescentCurrent) {
      return finish(Termination::Quiescent);
    }
  }
  return finish(Termination::MaxTime);
}

}  // namespace redsim
