#include "redsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "redsim/error.hpp"

namespace redsim {

std::string_view to_string(BrainStatus status) {
  switch (status) {
    case BrainStatus::Conscious:
      return "conscious";
    case BrainStatus::Ready:
      return "ready";
    case BrainStatus::Absent:
      return "absent";
  }
  return "absent";
}

bool parse_brain_status(std::string_view text, BrainStatus& out) {
  if (text == "conscious") {
    out = BrainStatus::Conscious;
  } else if (text == "ready") {
    out = BrainStatus::Ready;
  } else if (text == "absent") {
    out = BrainStatus::Absent;
  } else {
    return false;
  }
  return true;
}

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::Explicit:
      return "explicit";
    case Topology::SeriesChain:
      return "series_chain";
    case Topology::ParallelDiamond:
      return "parallel_diamond";
    case Topology::HammerChain:
      return "hammer_chain";
  }
  return "explicit";
}

bool parse_topology(std::string_view text, Topology& out) {
  for (auto t : {Topology::Explicit, Topology::SeriesChain,
                 Topology::ParallelDiamond, Topology::HammerChain}) {
    if (text == to_string(t)) {
      out = t;
      return true;
    }
  }
  return false;
}

BrainStatus Component::status_for(ObserverId observer) const {
  auto it = brain.find(observer);
  return it == brain.end() ? BrainStatus::Absent : it->second;
}

bool ValidationReport::contains(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationReport validate(const CouplingGraph& graph) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, std::string msg) {
    report.violations.push_back({kind, std::move(msg)});
  };

  const auto n = graph.components.size();
  if (n == 0) add(ViolationKind::EmptyGraph, "graph has no components");

  std::set<ObserverId> known;
  for (auto o : graph.observers) {
    if (!known.insert(o).second) {
      add(ViolationKind::DuplicateObserver,
          "duplicate observer " + std::to_string(o.value));
    }
  }

  std::map<ObserverId, std::vector<ComponentIndex>> conscious;
  for (ComponentIndex i = 0; i < n; ++i) {
    for (const auto& [observer, status] : graph.components[i].brain) {
      if (!known.contains(observer)) {
        add(ViolationKind::UnknownObserver,
            "component " + std::to_string(i) + " references unknown observer " +
                std::to_string(observer.value));
      }
      if (status == BrainStatus::Conscious) conscious[observer].push_back(i);
    }
  }
  for (auto o : known) {
    const auto& where = conscious[o];
    if (where.empty()) {
      add(ViolationKind::NoConscious,
          "observer " + std::to_string(o.value) + " has no conscious component");
    } else if (where.size() > 1) {
      add(ViolationKind::MultipleConscious,
          "multiple conscious components for observer " +
              std::to_string(o.value));
    }
  }

  std::set<std::pair<ComponentIndex, ComponentIndex>> seen;
  for (const auto& e : graph.edges) {
    const auto pair = "(" + std::to_string(e.src) + "," + std::to_string(e.dst) + ")";
    if (e.src >= n || e.dst >= n) {
      add(ViolationKind::IndexOutOfRange, "edge " + pair + " index out of range");
      continue;
    }
    if (e.src == e.dst) add(ViolationKind::SelfLoop, "self-loop " + pair);
    if (!seen.emplace(e.src, e.dst).second) {
      add(ViolationKind::DuplicateEdge, "duplicate edge " + pair);
    }
    if (graph.components[e.src].terminal) {
      add(ViolationKind::TerminalWithOutgoing,
          "terminal component " + std::to_string(e.src) +
              " has outgoing edge " + pair);
    }
    if (!std::isfinite(e.coupling.k)) {
      add(ViolationKind::NonFiniteCoupling, "non-finite coupling on edge " + pair);
    } else if (e.coupling.k < 0.0) {
      add(ViolationKind::NegativeCoupling, "negative coupling on edge " + pair);
    }
  }
  return report;
}

void require_valid(const CouplingGraph& graph) {
  auto report = validate(graph);
  if (!report.ok()) {
    throw Error(ErrorCode::Validation, "invalid graph: " + report.to_string());
  }
}

ConsciousMap initial_conscious_map(const CouplingGraph& graph) {
  ConsciousMap out;
  for (ComponentIndex i = 0; i < graph.components.size(); ++i) {
    for (const auto& [observer, status] : graph.components[i].brain) {
      if (status == BrainStatus::Conscious) out.emplace(observer, i);
    }
  }
  return out;
}

ComponentIndex initial_component(const CouplingGraph& graph) {
  auto conscious = initial_conscious_map(graph);
  return conscious.empty() ? 0 : conscious.begin()->second;
}

BrainStatus effective_status(const CouplingGraph& graph,
                             const ConsciousMap& conscious,
                             ComponentIndex component, ObserverId observer) {
  auto it = conscious.find(observer);
  if (it != conscious.end() && it->second == component) {
    return BrainStatus::Conscious;
  }
  auto declared = graph.components[component].status_for(observer);
  return declared == BrainStatus::Absent ? BrainStatus::Absent
                                         : BrainStatus::Ready;
}

void move_consciousness(const CouplingGraph& graph, ConsciousMap& conscious,
                        ComponentIndex target) {
  for (auto o : graph.observers) {
    if (effective_status(graph, conscious, target, o) == BrainStatus::Ready) {
      conscious[o] = target;
    }
  }
}

bool rule4_allowed(const CouplingGraph& graph, const Edge& edge) {
  const auto& src = graph.components[edge.src];
  const auto& dst = graph.components[edge.dst];
  for (auto o : graph.observers) {
    if (src.status_for(o) == BrainStatus::Ready &&
        dst.status_for(o) == BrainStatus::Ready) {
      return false;
    }
  }
  return true;
}

bool rule4_allowed(const CouplingGraph& graph, const Edge& edge,
                   const ConsciousMap& conscious) {
  for (auto o : graph.observers) {
    if (effective_status(graph, conscious, edge.src, o) == BrainStatus::Ready &&
        effective_status(graph, conscious, edge.dst, o) == BrainStatus::Ready) {
      return false;
    }
  }
  return true;
}

std::vector<std::size_t> active_edge_indices(const CouplingGraph& graph,
                                             bool rule4_enabled,
                                             const ConsciousMap& conscious) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    if (!rule4_enabled || rule4_allowed(graph, graph.edges[i], conscious)) {
      out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = graph.edges[a];
    const auto& eb = graph.edges[b];
    return std::pair(ea.src, ea.dst) < std::pair(eb.src, eb.dst);
  });
  return out;
}

std::vector<Edge> active_edges(const CouplingGraph& graph, bool rule4_enabled,
                               const ConsciousMap& conscious) {
  std::vector<Edge> out;
  for (auto i : active_edge_indices(graph, rule4_enabled, conscious)) {
    out.push_back(graph.edges[i]);
  }
  return out;
}

std::vector<Edge> active_edges(const CouplingGraph& graph, bool rule4_enabled) {
  // Declared statuses coincide with the initial conscious assignment.
  return active_edges(graph, rule4_enabled, initial_conscious_map(graph));
}

double max_coupling(const CouplingGraph& graph) {
  double k = 0.0;
  for (const auto& e : graph.edges) k = std::max(k, e.coupling.k);
  return k;
}

double min_positive_coupling(const CouplingGraph& graph) {
  double k = 0.0;
  for (const auto& e : graph.edges) {
    if (e.coupling.k > 0.0 && (k == 0.0 || e.coupling.k < k)) k = e.coupling.k;
  }
  return k;
}

}  // namespace redsim
