#pragma once

// Builders for the three graph families: a series counter chain, the
// clockwise/counterclockwise diamond, and a decay-started hammer sweep.
// All builders use observer 0, conscious in component 0, and throw
// Error(BadSpec) on bad counts or negative/non-finite rates.

#include <cstddef>
#include <span>

#include "redsim/graph.hpp"

namespace redsim {

// n components "dial=i", edges (i, i+1) with rate k[i], last one terminal.
CouplingGraph series_chain(std::size_t n, std::span<const double> k);
// Same chain with one rate on every edge.
CouplingGraph series_chain(std::size_t n, double k);

// Component order is {0, r, l, f}.
struct DiamondIndex {
  static constexpr ComponentIndex start = 0;
  static constexpr ComponentIndex right = 1;
  static constexpr ComponentIndex left = 2;
  static constexpr ComponentIndex final = 3;
};

// Edges (0,r), (0,l), (r,f), (l,f); no direct 0 -> f coupling.
CouplingGraph parallel_diamond(double k_0r, double k_0l, double k_rf,
                               double k_lf);

// Component 0 is the undecayed source with the hammer vertical; components
// 1..n_angles are the hammer at successive angles. Edge (0,1) carries
// k_decay, edges (i,i+1) carry k_angle.
CouplingGraph hammer_chain(std::size_t n_angles, double k_decay, double k_angle);

}  // namespace redsim
