#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "redsim/error.hpp"
#include "redsim/scenarios.hpp"

using namespace redsim;

namespace {

const ObserverId kObserver{0};

std::vector<BrainStatus> statuses(const CouplingGraph& g) {
  std::vector<BrainStatus> out;
  for (const auto& c : g.components) out.push_back(c.status_for(kObserver));
  return out;
}

// Simple paths from `from` to `to` by depth-first enumeration.
std::size_t count_paths(const CouplingGraph& g, ComponentIndex from, ComponentIndex to,
                        std::size_t* max_len) {
  std::size_t found = 0;
  std::vector<ComponentIndex> path{from};
  std::function<void(ComponentIndex)> dfs = [&](ComponentIndex at) {
    if (at == to) {
      ++found;
      *max_len = std::max(*max_len, path.size() - 1);
      return;
    }
    for (const auto& e : g.edges) {
      if (e.src != at) continue;
      path.push_back(e.dst);
      dfs(e.dst);
      path.pop_back();
    }
  };
  dfs(from);
  return found;
}

}  // namespace

TEST_CASE("series_chain layout") {
  auto g = series_chain(4, 1.0);
  REQUIRE(g.components.size() == 4);
  REQUIRE(g.edges.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(g.edges[i].src == i);
    CHECK(g.edges[i].dst == i + 1);
  }
  CHECK(statuses(g) == std::vector{BrainStatus::Conscious, BrainStatus::Ready,
                                   BrainStatus::Ready, BrainStatus::Ready});
  CHECK(g.components[3].terminal);
  CHECK_FALSE(g.components[2].terminal);
  CHECK(g.components[2].apparatus_label == "dial=2");
  CHECK(g.topology == Topology::SeriesChain);
}

TEST_CASE("series_chain with per-edge rates") {
  const std::vector<double> k{0.5, 2.0};
  auto g = series_chain(3, k);
  CHECK(g.edges[0].coupling.k == 0.5);
  CHECK(g.edges[1].coupling.k == 2.0);
}

TEST_CASE("2-chain: rule 4 changes nothing") {
  auto g = series_chain(2, 1.0);
  CHECK(active_edges(g, true) == active_edges(g, false));
}

TEST_CASE("series_chain under rule 4 exposes only the first coupling") {
  auto on = active_edges(series_chain(4, 1.0), true);
  REQUIRE(on.size() == 1);
  CHECK(on[0].src == 0);
  CHECK(on[0].dst == 1);
}

TEST_CASE("builders reject bad specs") {
  auto expect_bad_spec = [](const std::function<void()>& f) {
    try {
      f();
      FAIL("expected BadSpec");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadSpec);
    }
  };
  expect_bad_spec([] { (void)series_chain(1, 1.0); });
  expect_bad_spec([] { (void)series_chain(3, -1.0); });
  expect_bad_spec([] { (void)series_chain(3, std::vector<double>{1.0}); });
  expect_bad_spec([] { (void)parallel_diamond(1, 1, -1, 1); });
  expect_bad_spec([] { (void)hammer_chain(1, 1, 1); });
  expect_bad_spec([] { (void)hammer_chain(3, -1, 1); });
  expect_bad_spec([] { (void)hammer_chain(3, 1, std::nan("")); });
}

TEST_CASE("parallel_diamond layout") {
  auto g = parallel_diamond(1, 2, 3, 4);
  using D = DiamondIndex;
  REQUIRE(g.components.size() == 4);
  CHECK(statuses(g) == std::vector{BrainStatus::Conscious, BrainStatus::Ready,
                                   BrainStatus::Ready, BrainStatus::Ready});
  CHECK(g.components[D::final].terminal);
  for (const auto& e : g.edges) {
    CHECK_FALSE((e.src == D::start && e.dst == D::final));
  }
  std::size_t longest = 0;
  CHECK(count_paths(g, D::start, D::final, &longest) == 2);
  CHECK(longest == 2);
}

TEST_CASE("parallel_diamond rule-4 mask is exactly the two final couplings") {
  auto g = parallel_diamond(1, 1, 1, 1);
  auto on = active_edges(g, true);
  auto all = active_edges(g, false);
  CHECK(all.size() - on.size() == 2);
  for (const auto& e : all) {
    const bool masked = std::find(on.begin(), on.end(), e) == on.end();
    CHECK(masked == (e.dst == DiamondIndex::final));
  }
}

TEST_CASE("hammer_chain is a labelled series chain") {
  auto h = hammer_chain(8, 0.5, 2.0);
  REQUIRE(h.components.size() == 9);
  REQUIRE(h.edges.size() == 8);
  CHECK(h.edges[0].coupling.k == 0.5);
  for (std::size_t i = 1; i < 8; ++i) CHECK(h.edges[i].coupling.k == 2.0);
  CHECK(h.components[8].terminal);
  CHECK(h.topology == Topology::HammerChain);

  auto s = series_chain(9, std::vector<double>{0.5, 2, 2, 2, 2, 2, 2, 2});
  CHECK(h.edges == s.edges);
  CHECK(statuses(h) == statuses(s));
}
