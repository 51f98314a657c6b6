#include "doctest.h"

#include <sstream>
#include <string>

#include "redsim/io.hpp"
#include "redsim/scenarios.hpp"

using namespace redsim;

namespace {

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1e-5) == "1e-05");
  const double x = 0.317844432899372684;
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("event CSV layout") {
  auto g = series_chain(4, 1.0);
  auto c = default_run_config(g);
  auto t = run_trajectory(g, c, 3);
  std::ostringstream os;
  write_event_header(os);
  write_event_rows(os, 3, t);
  const auto text = os.str();
  CHECK(first_line(text) == "traj_id,t,src,dst,target");
  CHECK(line_count(text) == 1 + t.events.size());
  CHECK(text.find("\n3,") != std::string::npos);
}

TEST_CASE("event CSV is byte-identical for equal seeds") {
  auto g = parallel_diamond(1, 2, 1, 3);
  auto c = default_run_config(g);
  c.rule4_enabled = false;
  c.seed = 77;
  auto csv = [&] {
    std::ostringstream os;
    write_event_header(os);
    for (std::uint64_t i = 0; i < 50; ++i) write_event_rows(os, i, run_trajectory(g, c, i));
    return os.str();
  };
  const auto a = csv();
  CHECK(a == csv());
  c.seed = 78;
  CHECK(a != csv());
}

TEST_CASE("trace CSV header and downsampling") {
  TraceRecorder trace;
  auto g = series_chain(3, 1.0);
  auto s = make_state(g, true, 1);
  for (int i = 0; i < 25000; ++i) {
    trace.record(s);
    s.time += 1e-3;
  }
  std::ostringstream full, sampled;
  write_trace_csv(full, trace, true);
  write_trace_csv(sampled, trace, false);
  CHECK(first_line(full.str()) == "t,m_0,m_1,m_2,total");
  CHECK(line_count(full.str()) == 25001);
  CHECK(line_count(sampled.str()) <= kMaxTraceRows + 1);
  CHECK(line_count(sampled.str()) > kMaxTraceRows / 2);
  CHECK(full.str().find("\n0,1,0,0,1\n") != std::string::npos);
}

TEST_CASE("short traces are written in full") {
  TraceRecorder trace;
  auto g = series_chain(2, 1.0);
  auto s = make_state(g, true, 1);
  trace.record(s);
  std::ostringstream os;
  write_trace_csv(os, trace, false);
  CHECK(os.str() == "t,m_0,m_1,total\n0,1,0,1\n");
}

TEST_CASE("ensemble report lists its sections") {
  auto g = parallel_diamond(1, 1, 1, 1);
  auto stats = run_ensemble(g, default_run_config(g), 40, 1);
  std::ostringstream os;
  write_stats_report(os, stats);
  const auto text = os.str();
  CHECK(first_line(text) == "# reduction-sim ensemble report v1");
  for (const char* key : {"n_trajectories = 40", "skip_count = 0", "[visit_order_histogram]",
                          "[first_hit]", "[absorbed_at]", "clockwise = "}) {
    CAPTURE(key);
    CHECK(text.find(key) != std::string::npos);
  }
}
