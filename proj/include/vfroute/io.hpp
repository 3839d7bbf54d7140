#pragma once

// File formats shared by the CLI and the tests:
//   contacts CSV    from,to,t_start_s,t_end_s,delay_ms,capacity_mbps
//   node table JSON {"functions":[...], "nodes":[{name,kind,budgets}...]}
//   request JSON    {source,dest,function,capacity_mbps,delay_bound_ms}
//   scenario JSON   full generator config including the seed
//   metrics CSV     one row per sweep point per algorithm
//   decision JSONL  one object per routed request
//
// Numeric fields are written with the exact fixed-point formatter, so a
// write/read cycle preserves values bit-for-bit and regenerated files hash
// identically.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfroute/constellation.hpp"
#include "vfroute/graph.hpp"
#include "vfroute/ilp.hpp"
#include "vfroute/path.hpp"
#include "vfroute/simulator.hpp"

namespace vfroute {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

// ---- contacts CSV ----------------------------------------------------------

inline constexpr const char* kContactsHeader = "from,to,t_start_s,t_end_s,delay_ms,capacity_mbps";

inline std::string write_contacts_csv(const ContactPlan& plan, const NodeTable& nodes) {
  std::string out = kContactsHeader;
  out += '\n';
  for (const ContactRecord& r : plan.records) {
    out += nodes.names[static_cast<std::size_t>(r.from.value)];
    out += ',';
    out += nodes.names[static_cast<std::size_t>(r.to.value)];
    out += ',';
    out += format_s(r.start);
    out += ',';
    out += format_s(r.end);
    out += ',';
    out += format_ms(r.delay);
    out += ',';
    out += format_mbps(r.capacity);
    out += '\n';
  }
  return out;
}

inline ContactPlan read_contacts_csv(const std::string& text, const NodeTable& nodes) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("contact plan is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kContactsHeader) throw InputError("unexpected contact plan header: " + line);

  ContactPlan plan;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 6)
      throw InputError("contact plan line " + std::to_string(line_no) + ": expected 6 fields");
    const auto from = nodes.find(fields[0]);
    const auto to = nodes.find(fields[1]);
    if (!from || !to)
      throw InputError("contact plan line " + std::to_string(line_no) + ": unknown node name");
    const auto t0 = parse_scaled(fields[2], 6);
    const auto t1 = parse_scaled(fields[3], 6);
    const auto delay = parse_scaled(fields[4], 6);
    const auto cap = parse_scaled(fields[5], 3);
    if (!t0 || !t1 || !delay || !cap)
      throw InputError("contact plan line " + std::to_string(line_no) + ": bad numeric field");
    if (*t0 >= *t1)
      throw InputError("contact plan line " + std::to_string(line_no) + ": contact must end after it starts");
    if (*delay < 0 || *cap < 0)
      throw InputError("contact plan line " + std::to_string(line_no) + ": negative attribute");
    if (*from == *to)
      throw InputError("contact plan line " + std::to_string(line_no) + ": self-loop contact");
    plan.records.push_back({*from, *to, *t0, *t1, *delay, *cap});
  }
  return plan;
}

// ---- node table JSON -------------------------------------------------------

inline std::string write_node_table_json(const NodeTable& nodes) {
  Json j;
  j["functions"] = nodes.functions;
  Json arr = Json::array();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Json n;
    n["name"] = nodes.names[i];
    n["kind"] = nodes.kinds[i] == NodeKind::Satellite ? "satellite" : "ground_terminal";
    Json budgets = Json::object();
    for (std::size_t f = 0; f < nodes.functions.size(); ++f)
      if (nodes.budgets[i][f] > 0) budgets[nodes.functions[f]] = nodes.budgets[i][f];
    n["budgets"] = budgets;
    arr.push_back(std::move(n));
  }
  j["nodes"] = std::move(arr);
  return j.dump(2) + "\n";
}

inline NodeTable read_node_table_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("node table: invalid JSON: ") + e.what());
  }
  NodeTable t;
  if (!j.contains("functions") || !j["functions"].is_array())
    throw InputError("node table: missing functions array");
  for (const auto& f : j["functions"]) t.functions.push_back(f.get<std::string>());
  if (!j.contains("nodes") || !j["nodes"].is_array())
    throw InputError("node table: missing nodes array");
  for (const auto& n : j["nodes"]) {
    const std::string name = n.at("name").get<std::string>();
    const std::string kind = n.at("kind").get<std::string>();
    if (t.find(name)) throw InputError("node table: duplicate node name " + name);
    t.names.push_back(name);
    if (kind == "satellite") t.kinds.push_back(NodeKind::Satellite);
    else if (kind == "ground_terminal") t.kinds.push_back(NodeKind::GroundTerminal);
    else throw InputError("node table: unknown kind " + kind);
    std::vector<std::int32_t> budgets(t.functions.size(), 0);
    if (n.contains("budgets")) {
      for (auto it = n["budgets"].begin(); it != n["budgets"].end(); ++it) {
        const auto f = t.find_function(it.key());
        if (!f) throw InputError("node table: budget for unknown function " + it.key());
        const auto count = it.value().get<std::int64_t>();
        if (count < 0) throw InputError("node table: negative budget for " + name);
        budgets[static_cast<std::size_t>(*f)] = static_cast<std::int32_t>(count);
      }
    }
    if (t.kinds.back() == NodeKind::GroundTerminal)
      for (std::int32_t b : budgets)
        if (b != 0) throw InputError("node table: ground terminal " + name + " cannot host functions");
    t.budgets.push_back(std::move(budgets));
  }
  return t;
}

// ---- request JSON ----------------------------------------------------------

inline ApplicationRequest read_request_json(const std::string& text, const NodeTable& nodes) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("request: invalid JSON: ") + e.what());
  }
  ApplicationRequest r;
  const std::string src = j.at("source").get<std::string>();
  const std::string dst = j.at("dest").get<std::string>();
  const std::string fn = j.at("function").get<std::string>();
  const auto source = nodes.find(src);
  const auto dest = nodes.find(dst);
  if (!source) throw InputError("request: unknown node " + src);
  if (!dest) throw InputError("request: unknown node " + dst);
  const auto function = nodes.find_function(fn);
  if (!function) throw InputError("request: unknown function " + fn);
  r.source = *source;
  r.dest = *dest;
  r.function = *function;
  r.capacity = from_double_scaled(j.at("capacity_mbps").get<double>(), 3);
  r.delay_bound = from_double_scaled(j.at("delay_bound_ms").get<double>(), 6);
  if (r.capacity <= 0 || r.delay_bound <= 0)
    throw InputError("request: capacity and delay bound must be positive");
  return r;
}

// ---- scenario spec JSON ----------------------------------------------------

inline std::string write_scenario_spec_json(const ScenarioSpec& s) {
  Json j;
  j["walker"] = {{"n_sats", s.walker.n_sats},
                 {"n_planes", s.walker.n_planes},
                 {"inclination_deg", s.walker.inclination_deg},
                 {"altitude_km", s.walker.altitude_km},
                 {"phasing_factor", s.walker.phasing_factor},
                 {"isl_pattern", "grid4"}};
  Json sites = Json::array();
  for (const GroundSite& g : s.sites)
    sites.push_back({{"name", g.name},
                     {"lat_deg", g.lat_deg},
                     {"lon_deg", g.lon_deg},
                     {"min_elevation_deg", g.min_elevation_deg}});
  j["sites"] = std::move(sites);
  j["horizon_s"] = format_s(s.horizon_us);
  j["step_s"] = format_s(s.step_us);
  j["n_functions"] = s.n_functions;
  j["function_fraction"] = s.function_fraction;
  j["call_cap"] = s.call_cap;
  j["seed"] = s.seed;
  return j.dump(2) + "\n";
}

inline ScenarioSpec read_scenario_spec_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("scenario: invalid JSON: ") + e.what());
  }
  ScenarioSpec s;
  try {
    const Json& w = j.at("walker");
    s.walker.n_sats = w.at("n_sats").get<std::int32_t>();
    s.walker.n_planes = w.at("n_planes").get<std::int32_t>();
    s.walker.inclination_deg = w.value("inclination_deg", 53.0);
    s.walker.altitude_km = w.value("altitude_km", 550.0);
    s.walker.phasing_factor = w.value("phasing_factor", 1);
    if (j.contains("sites")) {
      s.sites.clear();
      for (const auto& g : j["sites"])
        s.sites.push_back({g.at("name").get<std::string>(), g.at("lat_deg").get<double>(),
                           g.at("lon_deg").get<double>(), g.value("min_elevation_deg", 25.0)});
    }
    const auto parse_time = [](const Json& v, const char* what) {
      const auto parsed = v.is_string() ? parse_scaled(v.get<std::string>(), 6)
                                        : std::optional<std::int64_t>(from_double_scaled(v.get<double>(), 6));
      if (!parsed || *parsed <= 0) throw InputError(std::string("scenario: bad ") + what);
      return *parsed;
    };
    s.horizon_us = parse_time(j.at("horizon_s"), "horizon_s");
    s.step_us = parse_time(j.at("step_s"), "step_s");
    s.n_functions = j.value("n_functions", 3);
    s.function_fraction = j.value("function_fraction", 0.10);
    s.call_cap = j.value("call_cap", 1);
    s.seed = j.value("seed", std::uint64_t{1});
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("scenario: ") + e.what());
  }
  if (s.walker.n_sats <= 0 || s.walker.n_planes <= 0 || s.walker.n_sats % s.walker.n_planes != 0)
    throw InputError("scenario: n_sats must be a positive multiple of n_planes");
  if (s.sites.size() < 2) throw InputError("scenario: need at least two ground sites");
  if (s.function_fraction <= 0.0 || s.function_fraction > 1.0)
    throw InputError("scenario: function_fraction must be in (0, 1]");
  return s;
}

// ---- route / report JSON ---------------------------------------------------

inline Json route_path_to_json(const RoutePath& p, const NodeTable& nodes) {
  Json j;
  j["status"] = "routed";
  Json seq = Json::array();
  for (NodeId n : p.node_sequence()) seq.push_back(nodes.names[static_cast<std::size_t>(n.value)]);
  j["path"] = std::move(seq);
  j["delay_ms"] = format_ms(p.total_delay);
  j["hops"] = p.hops;
  j["function_node"] = nodes.names[static_cast<std::size_t>(p.function_node.value)];
  j["min_capacity_mbps"] = format_mbps(p.min_capacity);
  return j;
}

inline Json vfsp_diag_to_json(const VfspDiag& d, const NodeTable& nodes) {
  Json j;
  if (d.function_node.value >= 0)
    j["function_node"] = nodes.names[static_cast<std::size_t>(d.function_node.value)];
  j["fwd_delay_ms"] = format_ms(d.fwd_delay);
  j["rev_delay_ms"] = format_ms(d.rev_delay);
  j["functional_count"] = d.functional_count;
  j["links_touched"] = d.links_touched;
  j["heap_pops"] = d.heap_pops;
  if (d.corner_fallback) j["corner_fallback"] = d.corner_mode;
  if (d.reject) j["reject"] = to_string(*d.reject);
  return j;
}

inline Json ksp_trace_to_json(const KspTrace& t) {
  Json j;
  j["paths_examined"] = t.paths_examined;
  j["shortcircuit"] = t.shortcircuit;
  if (t.reject) j["reject"] = to_string(*t.reject);
  return j;
}

inline Json constraint_report_to_json(const ConstraintReport& rep) {
  Json arr = Json::array();
  for (const TagStatus& t : rep.tags)
    arr.push_back({{"eq_tag", t.tag},
                   {"status", t.satisfied ? "satisfied" : "violated"},
                   {"witness", t.witness}});
  Json j;
  j["constraints"] = std::move(arr);
  j["objective_delay_ms"] = format_ms(rep.objective);
  return j;
}

// ---- metrics CSV / decision log --------------------------------------------

inline constexpr const char* kMetricsHeader =
    "param_value,algorithm,acceptance_ratio,mean_delay_ms,mean_hops,mean_query_us,p95_query_us";

inline std::string format_param_value(double v) {
  // Sweep values are config-provided decimals; six digits is exact for them.
  return format_scaled(from_double_scaled(v, 6), 6);
}

inline std::string metrics_csv_row(const SweepRow& row) {
  const Metrics& m = row.metrics;
  std::string out = format_param_value(row.param_value);
  out += ',';
  out += to_string(row.algorithm);
  out += ',';
  out += format_scaled(m.acceptance_ratio_micro(), 6);
  out += ',';
  out += format_ms(m.mean_delay_ns());
  out += ',';
  out += format_scaled(m.mean_hops_micro(), 6);
  out += ',';
  out += std::to_string(m.mean_query_us());
  out += ',';
  out += std::to_string(m.p95_query_us());
  return out;
}

inline std::string metrics_csv(const std::vector<SweepRow>& rows) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    out += metrics_csv_row(r);
    out += '\n';
  }
  return out;
}

inline Json decision_to_json(const DecisionRecord& rec, const NodeTable& nodes) {
  Json j;
  j["index"] = rec.index;
  j["arrival_s"] = format_s(rec.arrival);
  j["source"] = nodes.names[static_cast<std::size_t>(rec.request.source.value)];
  j["dest"] = nodes.names[static_cast<std::size_t>(rec.request.dest.value)];
  j["function"] = nodes.functions[static_cast<std::size_t>(rec.request.function)];
  j["capacity_mbps"] = format_mbps(rec.request.capacity);
  j["delay_bound_ms"] = format_ms(rec.request.delay_bound);
  j["decision"] = rec.accepted ? "accepted" : "rejected";
  if (rec.accepted) {
    j["delay_ms"] = format_ms(rec.delay);
    j["hops"] = rec.hops;
    j["function_node"] = nodes.names[static_cast<std::size_t>(rec.function_node.value)];
    Json seq = Json::array();
    for (NodeId n : rec.path_nodes) seq.push_back(nodes.names[static_cast<std::size_t>(n.value)]);
    j["path"] = std::move(seq);
  } else {
    j["reason"] = to_string(rec.reject);
  }
  if (rec.paths_examined > 0) j["paths_examined"] = rec.paths_examined;
  return j;
}

inline std::string decision_log_jsonl(const Metrics& m, const NodeTable& nodes) {
  std::string out;
  for (const DecisionRecord& rec : m.log) {
    out += decision_to_json(rec, nodes).dump();
    out += '\n';
  }
  return out;
}

}  // namespace vfroute
