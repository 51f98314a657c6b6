#pragma once

// Text output: event and modulus-trace CSVs, ensemble and comparison
// reports. Every number is written in shortest round-trip decimal.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

#include "redsim/analysis.hpp"
#include "redsim/dynamics.hpp"

namespace redsim {

std::string format_double(double value);

inline constexpr std::size_t kMaxTraceRows = 10000;

// Header `traj_id,t,src,dst,target`.
void write_event_header(std::ostream& os);
void write_event_rows(std::ostream& os, std::uint64_t traj_id,
                      const Trajectory& trajectory);

// Header `t,m_0,...,m_{n-1},total`. Unless `full`, rows are taken at a
// uniform stride so that at most kMaxTraceRows are written.
void write_trace_csv(std::ostream& os, const TraceRecorder& trace, bool full);

void write_stats_report(std::ostream& os, const EnsembleStats& stats);
void write_comparison_report(std::ostream& os, const ComparisonReport& report,
                             const std::string& label_a,
                             const std::string& label_b);
void write_first_hit(std::ostream& os, const FirstHitDistribution& dist);

}  // namespace redsim
