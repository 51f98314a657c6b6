#include "redsim/scenarios.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "redsim/error.hpp"

namespace redsim {
namespace {

constexpr ObserverId kObserver{0};

void check_rate(double k, const char* name) {
  if (!std::isfinite(k) || k < 0.0) {
    throw Error(ErrorCode::BadSpec, std::string(name) +
                                        " must be a finite non-negative rate");
  }
}

Component make_component(std::string label, BrainStatus status,
                         bool terminal = false) {
  Component c;
  c.apparatus_label = std::move(label);
  c.brain[kObserver] = status;
  c.terminal = terminal;
  return c;
}

Edge make_edge(ComponentIndex src, ComponentIndex dst, double k) {
  return Edge{src, dst, CurrentParams{CurrentModel::RateLinear, k}};
}

}  // namespace

CouplingGraph series_chain(std::size_t n, std::span<const double> k) {
  if (n < 2) throw Error(ErrorCode::BadSpec, "series_chain needs n >= 2");
  if (k.size() != n - 1) {
    throw Error(ErrorCode::BadSpec, "series_chain needs n-1 = " +
                                        std::to_string(n - 1) + " rates, got " +
                                        std::to_string(k.size()));
  }
  for (double rate : k) check_rate(rate, "k");

  CouplingGraph g;
  g.topology = Topology::SeriesChain;
  g.observers = {kObserver};
  for (std::size_t i = 0; i < n; ++i) {
    g.components.push_back(make_component(
        "dial=" + std::to_string(i),
        i == 0 ? BrainStatus::Conscious : BrainStatus::Ready, i + 1 == n));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) g.edges.push_back(make_edge(i, i + 1, k[i]));
  return g;
}

CouplingGraph series_chain(std::size_t n, double k) {
  if (n < 2) throw Error(ErrorCode::BadSpec, "series_chain needs n >= 2");
  std::vector<double> rates(n - 1, k);
  return series_chain(n, rates);
}

CouplingGraph parallel_diamond(double k_0r, double k_0l, double k_rf,
                               double k_lf) {
  check_rate(k_0r, "k_0r");
  check_rate(k_0l, "k_0l");
  check_rate(k_rf, "k_rf");
  check_rate(k_lf, "k_lf");

  CouplingGraph g;
  g.topology = Topology::ParallelDiamond;
  g.observers = {kObserver};
  g.components = {
      make_component("initial", BrainStatus::Conscious),
      make_component("clockwise intermediate r", BrainStatus::Ready),
      make_component("counterclockwise intermediate l", BrainStatus::Ready),
      make_component("final f", BrainStatus::Ready, true),
  };
  using D = DiamondIndex;
  g.edges = {make_edge(D::start, D::right, k_0r), make_edge(D::start, D::left, k_0l),
             make_edge(D::right, D::final, k_rf), make_edge(D::left, D::final, k_lf)};
  return g;
}

CouplingGraph hammer_chain(std::size_t n_angles, double k_decay, double k_angle) {
  if (n_angles < 2) throw Error(ErrorCode::BadSpec, "hammer_chain needs n_angles >= 2");
  check_rate(k_decay, "k_decay");
  check_rate(k_angle, "k_angle");

  CouplingGraph g;
  g.topology = Topology::HammerChain;
  g.observers = {kObserver};
  g.components.push_back(make_component("no decay, hammer vertical", BrainStatus::Conscious));
  for (std::size_t i = 1; i <= n_angles; ++i) {
    g.components.push_back(make_component("hammer at angle " + std::to_string(i),
                                          BrainStatus::Ready, i == n_angles));
  }
  g.edges.push_back(make_edge(0, 1, k_decay));
  for (std::size_t i = 1; i < n_angles; ++i) g.edges.push_back(make_edge(i, i + 1, k_angle));
  return g;
}

}  // namespace redsim
