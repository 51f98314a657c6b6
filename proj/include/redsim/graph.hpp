#pragma once

// Components of the superposition, the observers' brain statuses, and the
// directed coupling graph along which probability current flows.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace redsim {

using ComponentIndex = std::size_t;

struct ObserverId {
  std::uint32_t value = 0;

  friend auto operator<=>(const ObserverId&, const ObserverId&) = default;
};

enum class BrainStatus { Conscious, Ready, Absent };

std::string_view to_string(BrainStatus status);
// Accepts the file-format spellings `conscious`, `ready`, `absent`.
bool parse_brain_status(std::string_view text, BrainStatus& out);

enum class CurrentModel { RateLinear };

// Parameters of the current carried by one coupling. RateLinear: J = k * m_src.
struct CurrentParams {
  CurrentModel model = CurrentModel::RateLinear;
  double k = 0.0;

  friend bool operator==(const CurrentParams&, const CurrentParams&) = default;
};

struct Component {
  std::string apparatus_label;
  std::map<ObserverId, BrainStatus> brain;
  bool terminal = false;

  // Absent when the observer has no entry.
  BrainStatus status_for(ObserverId observer) const;

  friend bool operator==(const Component&, const Component&) = default;
};

struct Edge {
  ComponentIndex src = 0;
  ComponentIndex dst = 0;
  CurrentParams coupling;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Builder family a graph came from. Only used to decide which path
// statistics are meaningful; dynamics never look at it.
enum class Topology { Explicit, SeriesChain, ParallelDiamond, HammerChain };

std::string_view to_string(Topology topology);
bool parse_topology(std::string_view text, Topology& out);

struct CouplingGraph {
  std::vector<Component> components;
  std::vector<Edge> edges;
  std::vector<ObserverId> observers;
  Topology topology = Topology::Explicit;

  friend bool operator==(const CouplingGraph&, const CouplingGraph&) = default;
};

// Which component each observer is currently conscious in.
using ConsciousMap = std::map<ObserverId, ComponentIndex>;

enum class ViolationKind {
  EmptyGraph,
  IndexOutOfRange,
  SelfLoop,
  DuplicateEdge,
  MultipleConscious,
  NoConscious,
  UnknownObserver,
  DuplicateObserver,
  TerminalWithOutgoing,
  NegativeCoupling,
  NonFiniteCoupling,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool contains(ViolationKind kind) const;
  std::string to_string() const;
};

ValidationReport validate(const CouplingGraph& graph);

// Throws Error(Validation) carrying the report text if the graph is not
// runnable.
void require_valid(const CouplingGraph& graph);

// Component the observers start out conscious in: the Conscious component of
// the lowest observer id, or component 0 for observer-free graphs.
ComponentIndex initial_component(const CouplingGraph& graph);

ConsciousMap initial_conscious_map(const CouplingGraph& graph);

// Brain status of `component` for `observer` once consciousness has moved to
// `conscious`: Conscious where the observer is now conscious, declared
// Absent stays Absent, every other declared status reads as Ready.
BrainStatus effective_status(const CouplingGraph& graph,
                             const ConsciousMap& conscious,
                             ComponentIndex component, ObserverId observer);

// Rule-(3) bookkeeping: every observer whose brain state in `target` is
// Ready becomes conscious there.
void move_consciousness(const CouplingGraph& graph, ConsciousMap& conscious,
                        ComponentIndex target);

// Rule (4) on declared statuses: false iff some observer has a Ready brain
// state in both endpoints.
bool rule4_allowed(const CouplingGraph& graph, const Edge& edge);

// Same predicate evaluated against the current conscious assignment.
bool rule4_allowed(const CouplingGraph& graph, const Edge& edge,
                   const ConsciousMap& conscious);

// Indices into graph.edges, sorted by (src, dst).
std::vector<std::size_t> active_edge_indices(const CouplingGraph& graph,
                                             bool rule4_enabled,
                                             const ConsciousMap& conscious);

std::vector<Edge> active_edges(const CouplingGraph& graph, bool rule4_enabled);
std::vector<Edge> active_edges(const CouplingGraph& graph, bool rule4_enabled,
                               const ConsciousMap& conscious);

double max_coupling(const CouplingGraph& graph);
// Smallest strictly positive coupling, 0 if none.
double min_positive_coupling(const CouplingGraph& graph);

}  // namespace redsim
