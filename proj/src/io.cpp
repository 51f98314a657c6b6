#include "redsim/io.hpp"

#include <charconv>

namespace redsim {

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_event_header(std::ostream& os) { os << "traj_id,t,src,dst,target\n"; }

void write_event_rows(std::ostream& os, std::uint64_t traj_id,
                      const Trajectory& trajectory) {
  for (const auto& e : trajectory.events) {
    os << traj_id << ',' << format_double(e.time) << ',' << e.src << ','
       << e.dst << ',' << e.target << '\n';
  }
}

void write_trace_csv(std::ostream& os, const TraceRecorder& trace, bool full) {
  const auto n = trace.moduli.empty() ? 0 : trace.moduli.front().size();
  os << 't';
  for (std::size_t i = 0; i < n; ++i) os << ",m_" << i;
  os << ",total\n";

  const auto rows = trace.times.size();
  const std::size_t stride =
      full || rows <= kMaxTraceRows ? 1 : (rows + kMaxTraceRows - 1) / kMaxTraceRows;
  for (std::size_t r = 0; r < rows; r += stride) {
    double total = 0.0;
    os << format_double(trace.times[r]);
    for (double m : trace.moduli[r]) {
      os << ',' << format_double(m);
      total += m;
    }
    os << ',' << format_double(total) << '\n';
  }
}

void write_stats_report(std::ostream& os, const EnsembleStats& stats) {
  os << "# reduction-sim ensemble report v1\n";
  os << "n_trajectories = " << stats.n_trajectories << '\n';
  os << "component_count = " << stats.component_count << '\n';
  os << "rule4 = " << (stats.rule4_enabled ? "on" : "off") << '\n';
  os << "seed = " << stats.seed << '\n';
  os << "skip_count = " << stats.skip_count << '\n';
  if (stats.n_trajectories > 0) {
    os << "skip_rate = " << format_double(skip_rate(stats)) << '\n';
  }
  os << "absorption_count = " << stats.absorption_count << '\n';
  os << "mean_absorption_time = " << format_double(stats.mean_absorption_time) << '\n';
  os << "max_time_count = " << stats.max_time_count << '\n';
  os << "quiescent_count = " << stats.quiescent_count << '\n';
  os << "no_hit_count = " << stats.no_hit_count << '\n';
  os << "mask_violations = " << stats.mask_violations << '\n';
  os << "failure_count = " << stats.failure_count << '\n';
  for (const auto& f : stats.failures) os << "failure = " << f << '\n';
  if (stats.path_counts) {
    os << "path_clockwise = " << stats.path_counts->clockwise << '\n';
    os << "path_counterclockwise = " << stats.path_counts->counterclockwise << '\n';
    os << "path_direct = " << stats.path_counts->direct << '\n';
  }

  os << "\n[visit_order_histogram]\nsequence,count\n";
  for (const auto& [seq, count] : stats.visit_order_histogram) {
    os << signature(seq) << ',' << count << '\n';
  }
  os << "\n[first_hit]\ntarget,count\n";
  for (std::size_t c = 0; c < stats.first_hit_counts.size(); ++c) {
    os << c << ',' << stats.first_hit_counts[c] << '\n';
  }
  os << "none," << stats.no_hit_count << '\n';
  os << "\n[absorbed_at]\ncomponent,count\n";
  for (auto c : stats.terminal_components) {
    auto it = stats.absorbed_at.find(c);
    os << c << ',' << (it == stats.absorbed_at.end() ? 0 : it->second) << '\n';
  }
}

namespace {

void write_cells(std::ostream& os, const std::vector<CellComparison>& cells) {
  os << "cell,count_a,count_b,p_a,p_b,z\n";
  for (const auto& c : cells) {
    os << c.cell << ',' << c.count_a << ',' << c.count_b << ','
       << format_double(c.p_a) << ',' << format_double(c.p_b) << ','
       << format_double(c.z) << '\n';
  }
}

}  // namespace

void write_comparison_report(std::ostream& os, const ComparisonReport& report,
                             const std::string& label_a,
                             const std::string& label_b) {
  os << "# reduction-sim comparison report v1\n";
  os << "# endpoint cells compare absorption-state marginals; the visit-order\n";
  os << "# histogram is reported separately and may differ without a discrepancy.\n";
  os << "a = " << label_a << '\n';
  os << "b = " << label_b << '\n';
  os << "n_a = " << report.n_a << '\n';
  os << "n_b = " << report.n_b << '\n';
  os << "endpoint_tv = " << format_double(report.endpoint_tv) << '\n';
  os << "endpoint_max_abs_z = " << format_double(report.endpoint_max_abs_z) << '\n';
  os << "endpoint_discrepancy = " << (report.endpoint_discrepancy ? "true" : "false") << '\n';
  os << "visit_order_tv = " << format_double(report.visit_order_tv) << '\n';
  os << "visit_order_differs = " << (report.visit_order_differs ? "true" : "false") << '\n';
  for (const auto& seq : report.only_in_a) os << "only_in_a = " << signature(seq) << '\n';
  for (const auto& seq : report.only_in_b) os << "only_in_b = " << signature(seq) << '\n';
  os << "\n[endpoint]\n";
  write_cells(os, report.endpoint_cells);
  os << "\n[visit_order]\n";
  write_cells(os, report.visit_order_cells);
}

void write_first_hit(std::ostream& os, const FirstHitDistribution& dist) {
  os << "horizon = " << format_double(dist.horizon) << '\n';
  os << "dt = " << format_double(dist.dt) << '\n';
  os << "exhausted_at = " << format_double(dist.exhausted_at) << '\n';
  os << "survival = " << format_double(dist.survival) << '\n';
  for (std::size_t c = 0; c < dist.probability.size(); ++c) {
    os << "p_" << c << " = " << format_double(dist.probability[c]) << '\n';
  }
}

}  // namespace redsim
