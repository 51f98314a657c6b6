// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "redsim/redsim.h"

namespace {

const char* kDiamond = R"([scenario]
kind = parallel_diamond
k = 1
[run]
seed = 11
n_trajectories = 200
)";

rs_scenario* parse(const char* text) {
  rs_scenario* s = nullptr;
  REQUIRE(rs_scenario_parse(text, &s) == RS_OK);
  REQUIRE(s != nullptr);
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "redsim_capi_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("version and error reporting") {
  CHECK(std::string(rs_version()) == "1.0.0");
  rs_scenario* s = nullptr;
  CHECK(rs_scenario_parse("[scenario]\nkind = series_chain\nn = x\nk = 1\n", &s) == RS_ERR_PARSE);
  CHECK(s == nullptr);
  CHECK(std::string(rs_last_error()).find("line 3") != std::string::npos);
  CHECK(rs_scenario_parse("[scenario]\nkind = series_chain\nn = 1\nk = 1\n", &s) ==
        RS_ERR_VALIDATION);
  CHECK(rs_scenario_load("/nonexistent.ini", &s) == RS_ERR_IO);
  CHECK(rs_scenario_parse(nullptr, &s) == RS_ERR_ARGUMENT);
  CHECK(rs_scenario_parse(kDiamond, nullptr) == RS_ERR_ARGUMENT);
}

TEST_CASE("scenario accessors and overrides") {
  auto* s = parse(kDiamond);
  CHECK(rs_scenario_component_count(s) == 4);
  CHECK(rs_scenario_rule4(s) == 1);
  CHECK(rs_scenario_seed(s) == 11);
  CHECK(rs_scenario_trajectories(s) == 200);
  CHECK(rs_scenario_dt(s) == doctest::Approx(1e-3));
  CHECK(rs_scenario_max_time(s) == doctest::Approx(50.0));
  CHECK(rs_scenario_set_rule4(s, 0) == RS_OK);
  CHECK(rs_scenario_set_seed(s, 99) == RS_OK);
  CHECK(rs_scenario_set_trajectories(s, 0) == RS_ERR_ARGUMENT);
  CHECK(rs_scenario_set_output_dir(s, "elsewhere") == RS_OK);
  CHECK(std::string(rs_scenario_output_dir(s)) == "elsewhere");
  CHECK(rs_scenario_rule4(s) == 0);
  CHECK(rs_scenario_seed(s) == 99);

  char* text = nullptr;
  REQUIRE(rs_scenario_emit(s, &text) == RS_OK);
  auto* copy = parse(text);
  CHECK(rs_scenario_seed(copy) == 99);
  CHECK(rs_scenario_rule4(copy) == 0);
  rs_string_free(text);
  rs_scenario_free(copy);
  rs_scenario_free(s);
}

TEST_CASE("single trajectory") {
  auto* s = parse(kDiamond);
  rs_trajectory* t = nullptr;
  REQUIRE(rs_run_trajectory(s, 3, 1, &t) == RS_OK);
  CHECK(rs_trajectory_termination(t) == RS_ABSORBED);
  REQUIRE(rs_trajectory_visit_count(t) == 3);
  REQUIRE(rs_trajectory_event_count(t) == 2);
  rs_hit_event ev{};
  REQUIRE(rs_trajectory_event(t, 1, &ev) == RS_OK);
  CHECK(ev.target == 3);
  CHECK(ev.time == doctest::Approx(rs_trajectory_end_time(t)));
  CHECK(rs_trajectory_event(t, 2, &ev) == RS_ERR_ARGUMENT);
  size_t c = 0;
  CHECK(rs_trajectory_visit(t, 0, &c) == RS_OK);
  CHECK(c == 0);

  const auto events = scratch("events.csv");
  const auto trace = scratch("trace.csv");
  CHECK(rs_trajectory_write_events(t, events.string().c_str()) == RS_OK);
  CHECK(rs_trajectory_write_trace(t, trace.string().c_str(), 0) == RS_OK);
  CHECK(slurp(events).rfind("traj_id,t,src,dst,target\n", 0) == 0);
  CHECK(slurp(trace).rfind("t,m_0,m_1,m_2,m_3,total\n", 0) == 0);

  rs_trajectory* again = nullptr;
  REQUIRE(rs_run_trajectory(s, 3, 0, &again) == RS_OK);
  const auto events2 = scratch("events2.csv");
  CHECK(rs_trajectory_write_events(again, events2.string().c_str()) == RS_OK);
  CHECK(slurp(events) == slurp(events2));
  CHECK(rs_trajectory_write_trace(again, trace.string().c_str(), 0) == RS_ERR_ARGUMENT);
  CHECK(rs_trajectory_write_events(t, "/nonexistent/dir/e.csv") == RS_ERR_IO);

  rs_trajectory_free(again);
  rs_trajectory_free(t);
  rs_scenario_free(s);
}

TEST_CASE("ensembles and comparison") {
  auto* on = parse(kDiamond);
  rs_scenario* off = nullptr;
  REQUIRE(rs_scenario_clone(on, &off) == RS_OK);
  REQUIRE(rs_scenario_set_rule4(off, 0) == RS_OK);

  rs_ensemble* a = nullptr;
  rs_ensemble* b = nullptr;
  REQUIRE(rs_run_ensemble(on, 2, &a) == RS_OK);
  REQUIRE(rs_run_ensemble(off, 1, &b) == RS_OK);
  CHECK(rs_ensemble_trajectories(a) == 200);
  CHECK(rs_ensemble_absorbed(a) == 200);
  CHECK(rs_ensemble_skip_count(a) == 0);
  CHECK(rs_ensemble_failures(a) == 0);
  CHECK(rs_ensemble_mask_violations(b) == 0);
  CHECK(rs_ensemble_first_hits(a, 3) == 0);
  uint64_t cw = 0, ccw = 0, direct = 0;
  REQUIRE(rs_ensemble_paths(b, &cw, &ccw, &direct) == 1);
  CHECK(cw + ccw + direct == 200);
  CHECK(direct == rs_ensemble_skip_count(b));
  CHECK(direct > 0);

  rs_comparison* cmp = nullptr;
  REQUIRE(rs_compare(a, b, &cmp) == RS_OK);
  CHECK(rs_comparison_discrepancy(cmp) == 0);
  CHECK(rs_comparison_endpoint_tv(cmp) == 0.0);
  CHECK(rs_comparison_visit_order_differs(cmp) == 1);
  const auto report = scratch("comparison.txt");
  CHECK(rs_comparison_write_report(cmp, "on", "off", report.string().c_str()) == RS_OK);
  CHECK(slurp(report).find("visit_order_differs = true") != std::string::npos);
  CHECK(rs_ensemble_write_report(a, scratch("report.txt").string().c_str()) == RS_OK);

  auto* chain = parse("[scenario]\nkind = series_chain\nn = 3\nk = 1\n[run]\nn_trajectories = 5\n");
  rs_ensemble* c = nullptr;
  REQUIRE(rs_run_ensemble(chain, 1, &c) == RS_OK);
  rs_comparison* bad = nullptr;
  CHECK(rs_compare(a, c, &bad) == RS_ERR_INCOMPARABLE);
  CHECK(bad == nullptr);

  rs_ensemble_free(c);
  rs_scenario_free(chain);
  rs_comparison_free(cmp);
  rs_ensemble_free(b);
  rs_ensemble_free(a);
  rs_scenario_free(off);
  rs_scenario_free(on);
}

TEST_CASE("oracle through the C API") {
  auto* s = parse("[scenario]\nkind = series_chain\nn = 3\nk = 1\n[run]\nrule4 = off\n");
  std::vector<double> p(rs_scenario_component_count(s));
  double survival = -1.0;
  REQUIRE(rs_first_hit_oracle(s, 50, 1e-5, p.data(), &survival) == RS_OK);
  CHECK(p[2] == doctest::Approx(0.317844432899372684).epsilon(1e-7));
  CHECK(survival == doctest::Approx(0.0));
  CHECK(rs_first_hit_oracle(s, 50, 1e-2, p.data(), &survival) == RS_ERR_ARGUMENT);
  char* text = nullptr;
  REQUIRE(rs_first_hit_oracle_text(s, 50, 1e-5, &text) == RS_OK);
  CHECK(std::string(text).find("p_2 = 0.31784443") != std::string::npos);
  rs_string_free(text);
  rs_scenario_free(s);
}

TEST_CASE("null handles are rejected, not dereferenced") {
  CHECK(rs_run_trajectory(nullptr, 0, 0, nullptr) == RS_ERR_ARGUMENT);
  CHECK(rs_run_ensemble(nullptr, 0, nullptr) == RS_ERR_ARGUMENT);
  CHECK(rs_compare(nullptr, nullptr, nullptr) == RS_ERR_ARGUMENT);
  CHECK(rs_scenario_set_rule4(nullptr, 1) == RS_ERR_ARGUMENT);
  rs_scenario_free(nullptr);
  rs_trajectory_free(nullptr);
  rs_ensemble_free(nullptr);
  rs_comparison_free(nullptr);
}
