#include "doctest.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "redsim/analysis.hpp"
#include "redsim/error.hpp"
#include "redsim/scenarios.hpp"

using namespace redsim;

namespace {

CouplingGraph named_graph(const std::string& name) {
  if (name == "chain2") return series_chain(2, 1.0);
  if (name == "chain3") return series_chain(3, 1.0);
  if (name == "diamond") return parallel_diamond(1, 1, 1, 1);
  if (name == "hammer8") return hammer_chain(8, 1, 1);
  FAIL("unknown fixture graph " << name);
  return {};
}

RunConfig config_for(const CouplingGraph& g, bool rule4, std::uint64_t seed = 42) {
  auto c = default_run_config(g);
  c.rule4_enabled = rule4;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("oracle matches the frozen closed-form fixture") {
  std::ifstream in(REDSIM_FIXTURE_DIR "/first_hit_oracle.v1.csv");
  REQUIRE(in);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("scenario,", 0) == 0) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    REQUIRE(f.size() == 7);
    CAPTURE(line);
    const auto g = named_graph(f[0]);
    const auto dist = first_hit_oracle(g, f[1] == "on", std::stod(f[2]), std::stod(f[3]));
    double p = 0.0;
    if (f[4].back() == '+') {
      for (std::size_t i = std::stoul(f[4]); i < dist.probability.size(); ++i) p += dist.probability[i];
    } else {
      p = dist.probability.at(std::stoul(f[4]));
    }
    CHECK(std::abs(p - std::stod(f[5])) <= std::stod(f[6]));
    ++rows;
  }
  CHECK(rows == 14);
}

TEST_CASE("oracle distribution is normalized") {
  auto d = first_hit_oracle(series_chain(3, 1.0), false, 50, 1e-5);
  const double sum = std::accumulate(d.probability.begin(), d.probability.end(), 0.0);
  CHECK(sum + d.survival == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.probability[0] == 0.0);
  CHECK(d.exhausted_at == doctest::Approx(1.14619322062058).epsilon(1e-8));
}

TEST_CASE("oracle survival of the 2-chain at horizon 20") {
  auto d = first_hit_oracle(series_chain(2, 1.0), true, 20, 1e-5);
  CHECK(d.probability[1] >= 0.999);
  CHECK(d.survival == doctest::Approx(std::exp(-20.0)).epsilon(1e-5));
}

TEST_CASE("oracle enforces its accuracy preconditions") {
  auto g = series_chain(3, 1.0);
  CHECK_THROWS_AS(first_hit_oracle(g, false, 50, 1e-3), Error);
  CHECK_THROWS_AS(first_hit_oracle(g, false, 5, 1e-5), Error);
}

TEST_CASE("signature and skip detection") {
  auto g = series_chain(4, 1.0);
  CHECK(signature({0, 1, 2, 3}) == "0>1>2>3");
  CHECK_FALSE(has_skip(g, {0, 1, 2, 3}));
  CHECK(has_skip(g, {0, 2, 3}));
  CHECK(has_skip(g, {0, 1, 3}));
  CHECK_FALSE(has_skip(g, {0}));
}

TEST_CASE("ensemble results do not depend on the thread count") {
  auto g = parallel_diamond(1, 2, 1, 0.5);
  auto c = config_for(g, false, 5);
  auto one = run_ensemble(g, c, 300, 1);
  auto three = run_ensemble(g, c, 300, 3);
  CHECK(one == three);
  CHECK(one.n_trajectories == 300);
}

TEST_CASE("ensemble bookkeeping adds up") {
  auto g = parallel_diamond(1, 1, 1, 1);
  auto s = run_ensemble(g, config_for(g, false), 500, 1);
  std::size_t hist = 0;
  for (const auto& [seq, count] : s.visit_order_histogram) hist += count;
  CHECK(hist == 500);
  REQUIRE(s.path_counts);
  CHECK(s.path_counts->clockwise + s.path_counts->counterclockwise + s.path_counts->direct == 500);
  CHECK(s.skip_count == s.path_counts->direct);
  CHECK(skip_rate(s) == doctest::Approx(s.skip_count / 500.0));
  CHECK(s.absorption_count == 500);
  CHECK(s.absorbed_at.at(DiamondIndex::final) == 500);
  CHECK(std::accumulate(s.first_hit_counts.begin(), s.first_hit_counts.end(), std::size_t{0}) +
            s.no_hit_count == 500);
  CHECK(s.mask_violations == 0);
  CHECK(s.failure_count == 0);
  CHECK(s.mean_absorption_time > 0.0);
}

TEST_CASE("rule 4 on: series chain never skips") {
  auto g = series_chain(4, 1.0);
  auto s = run_ensemble(g, config_for(g, true), 200, 1);
  CHECK(s.skip_count == 0);
  CHECK(s.visit_order_histogram.size() == 1);
  CHECK(s.visit_order_histogram.begin()->first == VisitSequence{0, 1, 2, 3});
  CHECK(s.mask_violations == 0);
}

TEST_CASE("rule 4 first hits lie in the unmasked successor set") {
  for (const auto& g : {series_chain(5, 1.0), parallel_diamond(1, 3, 1, 1), hammer_chain(6, 1, 2)}) {
    auto s = run_ensemble(g, config_for(g, true), 200, 1);
    std::vector<bool> reachable(g.components.size(), false);
    for (const auto& e : active_edges(g, true)) reachable[e.dst] = true;
    for (std::size_t c = 0; c < g.components.size(); ++c) {
      if (!reachable[c]) CHECK(s.first_hit_counts[c] == 0);
    }
  }
}

TEST_CASE("mask audit flags hits along masked edges") {
  auto g = series_chain(4, 1.0);
  Trajectory ok;
  ok.events = {{0.1, 1, 0, 1}, {0.2, 2, 1, 2}, {0.3, 3, 2, 3}};
  ok.visit_sequence = {0, 1, 2, 3};
  CHECK(audit_mask(g, ok, true) == 0);

  Trajectory bad;
  bad.events = {{0.1, 2, 1, 2}, {0.3, 3, 2, 3}};
  bad.visit_sequence = {0, 2, 3};
  CHECK(audit_mask(g, bad, true) == 1);
  CHECK(audit_mask(g, bad, false) == 0);

  Trajectory bogus;
  bogus.events = {{0.1, 3, 0, 3}};
  bogus.visit_sequence = {0, 3};
  CHECK(audit_mask(g, bogus, false) == 1);
}

TEST_CASE("two_proportion_z") {
  CHECK(two_proportion_z(50, 100, 50, 100) == 0.0);
  CHECK(two_proportion_z(0, 100, 0, 100) == 0.0);
  // p = 0.5 vs 0.6, pooled 0.55, se = sqrt(0.55*0.45*(2/100))
  CHECK(two_proportion_z(50, 100, 60, 100) ==
        doctest::Approx(-0.1 / std::sqrt(0.55 * 0.45 * 0.02)));
}

TEST_CASE("comparing an ensemble with itself") {
  auto g = parallel_diamond(1, 1, 1, 1);
  auto s = run_ensemble(g, config_for(g, false), 300, 1);
  auto r = compare_statistics(s, s);
  CHECK(r.endpoint_tv == 0.0);
  CHECK(r.endpoint_max_abs_z == 0.0);
  CHECK_FALSE(r.endpoint_discrepancy);
  CHECK(r.visit_order_tv == 0.0);
  CHECK_FALSE(r.visit_order_differs);
  CHECK(r.only_in_a.empty());
  CHECK(r.only_in_b.empty());
}

TEST_CASE("rule 4 on and off on the diamond: same endpoint, different orders") {
  auto g = parallel_diamond(1, 1, 1, 1);
  auto on = run_ensemble(g, config_for(g, true), 400, 1);
  auto off = run_ensemble(g, config_for(g, false), 400, 1);
  auto r = compare_statistics(on, off);
  CHECK(r.endpoint_tv == 0.0);
  CHECK_FALSE(r.endpoint_discrepancy);
  CHECK(r.visit_order_differs);
  CHECK(r.only_in_a.empty());
  REQUIRE(r.only_in_b.size() == 1);
  CHECK(r.only_in_b[0] == VisitSequence{0, DiamondIndex::final});
}

TEST_CASE("incomparable ensembles") {
  auto d = parallel_diamond(1, 1, 1, 1);
  auto c = series_chain(3, 1.0);
  auto sd = run_ensemble(d, config_for(d, true), 20, 1);
  auto sc = run_ensemble(c, config_for(c, true), 20, 1);
  try {
    (void)compare_statistics(sd, sc);
    FAIL("expected IncomparableStats");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncomparableStats);
  }
  CHECK_THROWS_AS(compare_statistics(sd, EnsembleStats{}), Error);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  CHECK(resolve_thread_count(0) >= 1);
}
