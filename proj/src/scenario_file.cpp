#include "redsim/scenario_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "redsim/error.hpp"
#include "redsim/io.hpp"
#include "redsim/scenarios.hpp"

namespace redsim {
namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  std::size_t key_column = 0;
  std::size_t value_column = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
  std::set<std::string> used;

  const Entry* find(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    used.insert(key);
    return &it->second;
  }

  const Entry& require(const std::string& key) {
    if (const auto* e = find(key)) return *e;
    throw ParseError(line, 1, "section [" + name + "] is missing key '" + key + "'");
  }

  void reject_unused() const {
    for (const auto& [key, entry] : entries) {
      if (!used.contains(key)) {
        throw ParseError(entry.line, entry.key_column,
                         "unknown key '" + key + "' in [" + name + "]");
      }
    }
  }
};

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || raw[first] == '#') continue;
    const std::size_t col = first + 1;
    const auto line = trim(raw);

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError(line_no, col, "malformed section header");
      }
      Section s;
      s.name = std::string(trim(line.substr(1, line.size() - 2)));
      s.line = line_no;
      sections.push_back(std::move(s));
      continue;
    }
    if (sections.empty()) {
      throw ParseError(line_no, col, "key outside of any section");
    }
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, col, "expected 'key = value'");
    }
    const auto key = std::string(trim(raw.substr(0, eq)));
    if (key.empty()) throw ParseError(line_no, col, "empty key");
    std::string_view value = raw.substr(eq + 1);
    if (key != "label") {
      // Inline comments: '#' preceded by whitespace.
      for (std::size_t i = 1; i < value.size(); ++i) {
        if (value[i] == '#' && (value[i - 1] == ' ' || value[i - 1] == '\t')) {
          value = value.substr(0, i);
          break;
        }
      }
    }
    const auto value_start = raw.find_first_not_of(" \t", eq + 1);
    Entry entry{std::string(trim(value)), line_no, col,
                (value_start == std::string_view::npos ? eq + 1 : value_start) + 1};
    auto& section = sections.back();
    if (!section.entries.emplace(key, std::move(entry)).second) {
      throw ParseError(line_no, col, "duplicate key '" + key + "'");
    }
  }
  return sections;
}

double to_double(const Entry& e, std::string_view text, std::size_t offset = 0) {
  double v = 0.0;
  const auto* b = text.data();
  const auto* end = b + text.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end || text.empty()) {
    throw ParseError(e.line, e.value_column + offset,
                     "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

double to_double(const Entry& e) { return to_double(e, e.value); }

std::uint64_t to_uint(const Entry& e, std::string_view text, std::size_t offset = 0) {
  std::uint64_t v = 0;
  const auto* b = text.data();
  const auto* end = b + text.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end || text.empty()) {
    throw ParseError(e.line, e.value_column + offset,
                     "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t to_uint(const Entry& e) { return to_uint(e, e.value); }

bool to_bool(const Entry& e) {
  const auto& v = e.value;
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ParseError(e.line, e.value_column, "expected on/off or true/false, got '" + v + "'");
}

// Comma-separated items with their column offsets inside the value.
std::vector<std::pair<std::string_view, std::size_t>> split_list(std::string_view v) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  if (trim(v).empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = v.find(',', start);
    auto piece = v.substr(start, comma == std::string_view::npos ? v.npos : comma - start);
    const auto lead = piece.find_first_not_of(" \t");
    out.emplace_back(trim(piece), start + (lead == piece.npos ? 0 : lead));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> to_double_list(const Entry& e) {
  std::vector<double> out;
  for (auto [item, offset] : split_list(e.value)) out.push_back(to_double(e, item, offset));
  if (out.empty()) throw ParseError(e.line, e.value_column, "expected at least one number");
  return out;
}

// Runs a builder, reporting its precondition failures as validation errors.
template <typename F>
CouplingGraph build(F&& f) {
  try {
    return f();
  } catch (const Error& err) {
    if (err.code() == ErrorCode::BadSpec) {
      throw Error(ErrorCode::Validation, std::string("invalid scenario: ") + err.what());
    }
    throw;
  }
}

std::optional<std::size_t> indexed(const std::string& name, std::string_view prefix) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
    return std::nullopt;
  }
  std::size_t v = 0;
  const auto* b = name.data() + prefix.size();
  const auto* end = name.data() + name.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

CouplingGraph parse_explicit(Section& scenario, std::vector<Section*>& components,
                             std::map<std::size_t, Section*>& edges) {
  CouplingGraph g;
  std::set<ObserverId> seen_observers;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (!components[i]) {
      throw ParseError(scenario.line, 1,
                       "missing section [component." + std::to_string(i) + "]");
    }
    auto& s = *components[i];
    Component c;
    if (const auto* e = s.find("label")) c.apparatus_label = e->value;
    if (const auto* e = s.find("terminal")) c.terminal = to_bool(*e);
    if (const auto* e = s.find("brain")) {
      for (auto [item, offset] : split_list(e->value)) {
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
          throw ParseError(e->line, e->value_column + offset,
                           "expected 'observer:status', got '" + std::string(item) + "'");
        }
        ObserverId o{static_cast<std::uint32_t>(to_uint(*e, trim(item.substr(0, colon)), offset))};
        BrainStatus status;
        if (!parse_brain_status(trim(item.substr(colon + 1)), status)) {
          throw ParseError(e->line, e->value_column + offset + colon + 1,
                           "unknown brain status '" + std::string(item.substr(colon + 1)) +
                               "' (expected conscious, ready or absent)");
        }
        if (!c.brain.emplace(o, status).second) {
          throw ParseError(e->line, e->value_column + offset,
                           "observer listed twice in brain");
        }
        seen_observers.insert(o);
      }
    }
    s.reject_unused();
    g.components.push_back(std::move(c));
  }
  for (auto& [j, sp] : edges) {
    auto& s = *sp;
    Edge edge;
    edge.src = to_uint(s.require("src"));
    edge.dst = to_uint(s.require("dst"));
    if (const auto* e = s.find("model"); e && e->value != "rate_linear") {
      throw ParseError(e->line, e->value_column, "unknown current model '" + e->value + "'");
    }
    edge.coupling = CurrentParams{CurrentModel::RateLinear, to_double(s.require("k"))};
    s.reject_unused();
    g.edges.push_back(edge);
  }
  if (const auto* e = scenario.find("observers")) {
    for (auto [item, offset] : split_list(e->value)) {
      g.observers.push_back(ObserverId{static_cast<std::uint32_t>(to_uint(*e, item, offset))});
    }
  } else {
    g.observers.assign(seen_observers.begin(), seen_observers.end());
  }
  if (const auto* e = scenario.find("topology")) {
    if (!parse_topology(e->value, g.topology)) {
      throw ParseError(e->line, e->value_column, "unknown topology '" + e->value + "'");
    }
  }
  return g;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text) {
  auto sections = split_sections(text);
  Section* scenario = nullptr;
  Section* run = nullptr;
  std::vector<Section*> components;
  std::map<std::size_t, Section*> edges;
  for (auto& s : sections) {
    auto claim = [&s](Section*& slot) {
      if (slot) throw ParseError(s.line, 1, "duplicate section [" + s.name + "]");
      slot = &s;
    };
    if (s.name == "scenario") {
      claim(scenario);
    } else if (s.name == "run") {
      claim(run);
    } else if (auto i = indexed(s.name, "component.")) {
      if (*i >= components.size()) components.resize(*i + 1, nullptr);
      claim(components[*i]);
    } else if (auto j = indexed(s.name, "edge.")) {
      Section* slot = edges.contains(*j) ? edges[*j] : nullptr;
      claim(slot);
      edges[*j] = slot;
    } else {
      throw ParseError(s.line, 1, "unknown section [" + s.name + "]");
    }
  }
  if (!scenario) throw ParseError(1, 1, "missing [scenario] section");

  const auto& kind_entry = scenario->require("kind");
  const auto& kind = kind_entry.value;
  if (kind != "explicit" && (!components.empty() || !edges.empty())) {
    throw ParseError(kind_entry.line, kind_entry.value_column,
                     "component/edge sections require kind = explicit");
  }

  Scenario out;
  if (kind == "series_chain") {
    const auto n = to_uint(scenario->require("n"));
    auto k = to_double_list(scenario->require("k"));
    out.graph = build([&] {
      if (k.size() == 1 && n >= 2) return series_chain(n, k.front());
      return series_chain(n, k);
    });
  } else if (kind == "parallel_diamond") {
    double rates[4];
    const char* names[4] = {"k_0r", "k_0l", "k_rf", "k_lf"};
    const auto* all = scenario->find("k");
    for (int i = 0; i < 4; ++i) {
      const auto* e = scenario->find(names[i]);
      if (!e && !all) throw ParseError(scenario->line, 1, std::string("missing key '") + names[i] + "'");
      rates[i] = to_double(e ? *e : *all);
    }
    out.graph = build([&] { return parallel_diamond(rates[0], rates[1], rates[2], rates[3]); });
  } else if (kind == "hammer_chain") {
    const auto n = to_uint(scenario->require("n_angles"));
    const auto k_decay = to_double(scenario->require("k_decay"));
    const auto k_angle = to_double(scenario->require("k_angle"));
    out.graph = build([&] { return hammer_chain(n, k_decay, k_angle); });
  } else if (kind == "explicit") {
    out.graph = parse_explicit(*scenario, components, edges);
  } else {
    throw ParseError(kind_entry.line, kind_entry.value_column, "unknown kind '" + kind + "'");
  }
  scenario->reject_unused();

  auto report = validate(out.graph);
  if (!report.ok()) {
    throw Error(ErrorCode::Validation, "invalid scenario: " + report.to_string());
  }

  out.config = default_run_config(out.graph);
  if (run) {
    if (const auto* e = run->find("dt")) out.config.dt = to_double(*e);
    if (const auto* e = run->find("max_time")) out.config.max_time = to_double(*e);
    if (const auto* e = run->find("seed")) out.config.seed = to_uint(*e);
    if (const auto* e = run->find("rule4")) out.config.rule4_enabled = to_bool(*e);
    if (const auto* e = run->find("n_trajectories")) out.config.n_trajectories = to_uint(*e);
    if (const auto* e = run->find("emit_traces")) out.config.emit_traces = to_bool(*e);
    if (const auto* e = run->find("full_trace")) out.config.full_trace = to_bool(*e);
    if (const auto* e = run->find("output_dir")) out.config.output_dir = e->value;
    run->reject_unused();
  }
  try {
    check_run_config(out.config);
  } catch (const Error& err) {
    throw Error(ErrorCode::Validation, std::string("invalid [run] section: ") + err.what());
  }
  return out;
}

Scenario parse_scenario(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open scenario file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string emit_scenario(const Scenario& scenario) {
  const auto& g = scenario.graph;
  const auto& c = scenario.config;
  std::ostringstream os;
  os << "[scenario]\nkind = explicit\n";
  os << "topology = " << to_string(g.topology) << '\n';
  os << "observers = ";
  for (std::size_t i = 0; i < g.observers.size(); ++i) {
    os << (i ? ", " : "") << g.observers[i].value;
  }
  os << "\n\n[run]\n";
  os << "dt = " << format_double(c.dt) << '\n';
  os << "max_time = " << format_double(c.max_time) << '\n';
  os << "seed = " << c.seed << '\n';
  os << "rule4 = " << (c.rule4_enabled ? "on" : "off") << '\n';
  os << "n_trajectories = " << c.n_trajectories << '\n';
  os << "emit_traces = " << (c.emit_traces ? "true" : "false") << '\n';
  os << "full_trace = " << (c.full_trace ? "true" : "false") << '\n';
  os << "output_dir = " << c.output_dir.string() << '\n';
  for (std::size_t i = 0; i < g.components.size(); ++i) {
    const auto& comp = g.components[i];
    os << "\n[component." << i << "]\n";
    os << "label = " << comp.apparatus_label << '\n';
    os << "brain = ";
    bool first = true;
    for (const auto& [o, status] : comp.brain) {
      os << (first ? "" : ", ") << o.value << ':' << to_string(status);
      first = false;
    }
    os << "\nterminal = " << (comp.terminal ? "true" : "false") << '\n';
  }
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    const auto& e = g.edges[j];
    os << "\n[edge." << j << "]\n";
    os << "src = " << e.src << "\ndst = " << e.dst << "\nmodel = rate_linear\n";
    os << "k = " << format_double(e.coupling.k) << '\n';
  }
  return os.str();
}

}  // namespace redsim
