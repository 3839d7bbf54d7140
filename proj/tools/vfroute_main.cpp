// Command-line front end: scenario generation, single-request routing,
// campaign simulation and LP model export.
//
// Exit codes: 0 success (an infeasible route is a normal answer), 2 input
// error, 3 guard violation (oracle instance too large).

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vfroute/io.hpp"
#include "vfroute/oracle.hpp"

namespace fs = std::filesystem;
using namespace vfroute;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

// VFROUTE_OUT_DIR provides the default location for written artifacts when
// no --out is given; without it, file outputs default to the working
// directory and directory outputs require an explicit --out.
std::string resolve_out(const std::string& given, const char* default_name) {
  if (!given.empty()) return given;
  if (const char* dir = std::getenv("VFROUTE_OUT_DIR"))
    return default_name ? (fs::path(dir) / default_name).string() : std::string(dir);
  if (default_name) return default_name;
  throw InputError("--out not given and VFROUTE_OUT_DIR is not set");
}

struct PlanInputs {
  NodeTable nodes;
  ContactPlan plan;
  TimeWindow horizon;
};

PlanInputs load_plan(const std::string& plan_path, const std::string& nodes_path) {
  PlanInputs in;
  in.nodes = read_node_table_json(read_file(nodes_path));
  in.plan = read_contacts_csv(read_file(plan_path), in.nodes);
  if (in.plan.records.empty()) throw InputError("contact plan has no records");
  TimeUs lo = in.plan.records.front().start, hi = in.plan.records.front().end;
  for (const ContactRecord& r : in.plan.records) {
    lo = std::min(lo, r.start);
    hi = std::max(hi, r.end);
  }
  in.horizon = {lo, hi};
  return in;
}

const Snapshot& snapshot_at(const std::vector<Snapshot>& snaps, TimeUs at) {
  for (const Snapshot& s : snaps)
    if (s.window.contains(at)) return s;
  if (!snaps.empty() && at == snaps.back().window.end) return snaps.back();
  throw InputError("time " + format_s(at) + " is outside the plan horizon");
}

SimulationConfig read_sim_config(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("sim config: invalid JSON: ") + e.what());
  }
  SimulationConfig cfg;
  cfg.n_requests = j.value("n_requests", cfg.n_requests);
  if (j.contains("capacity_mbps")) {
    cfg.capacity_lo = from_double_scaled(j["capacity_mbps"].at(0).get<double>(), 3);
    cfg.capacity_hi = from_double_scaled(j["capacity_mbps"].at(1).get<double>(), 3);
  }
  if (j.contains("delay_bound_ms")) {
    cfg.delay_lo = from_double_scaled(j["delay_bound_ms"].at(0).get<double>(), 6);
    cfg.delay_hi = from_double_scaled(j["delay_bound_ms"].at(1).get<double>(), 6);
  }
  cfg.n_functions = j.value("n_functions", cfg.n_functions);
  cfg.function_fraction = j.value("function_fraction", cfg.function_fraction);
  cfg.call_cap = j.value("call_cap", cfg.call_cap);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.ksp.k_max = j.value("k_max", cfg.ksp.k_max);
  const std::string res = j.value("reservation", "none");
  if (res == "none") cfg.reservation = CapacityReservationMode::None;
  else if (res == "until_horizon_end") cfg.reservation = CapacityReservationMode::UntilHorizonEnd;
  else throw InputError("sim config: unknown reservation mode " + res);
  return cfg;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == ',') {
      const std::string tok = csv.substr(start, i - start);
      if (!tok.empty()) {
        try {
          out.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw InputError("bad sweep value: " + tok);
        }
      }
      start = i + 1;
    }
  }
  return out;
}

int cmd_gen_scenario(const std::string& config_path, const std::string& out_dir) {
  const ScenarioSpec spec = read_scenario_spec_json(read_file(config_path));
  const Scenario sc = generate_scenario(spec);
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "contacts.csv").string(), write_contacts_csv(sc.plan, sc.nodes));
  write_file((fs::path(out_dir) / "nodes.json").string(), write_node_table_json(sc.nodes));
  write_file((fs::path(out_dir) / "scenario.json").string(), write_scenario_spec_json(spec));
  std::cout << "wrote contacts.csv, nodes.json, scenario.json to " << out_dir << "\n";
  return kExitOk;
}

int cmd_route(const std::string& plan_path, const std::string& nodes_path,
              const std::string& request_path, const std::string& algo, double at_s,
              std::int32_t k_max, bool no_shortcircuit) {
  const PlanInputs in = load_plan(plan_path, nodes_path);
  const ApplicationRequest req = read_request_json(read_file(request_path), in.nodes);
  const std::vector<Snapshot> snaps = build_snapshots(in.plan, in.horizon, in.nodes);
  const Snapshot& g = snapshot_at(snaps, from_double_scaled(at_s, 6));

  std::optional<RoutePath> path;
  std::optional<RejectReason> reject;
  if (algo == "vfsp") {
    VfspResult r = route_vfsp(g, req);
    path = std::move(r.path);
    reject = r.diag.reject;
  } else if (algo == "ksp") {
    KspConfig cfg;
    cfg.k_max = k_max;
    cfg.walk_bound_shortcircuit = !no_shortcircuit;
    KspResult r = route_ksp(g, req, cfg);
    path = std::move(r.path);
    reject = r.trace.reject;
  } else {  // oracle
    path = brute_force_optimal(g, req);
    if (!path) reject = RejectReason::NoPath;
  }

  Json j;
  if (path) {
    j = route_path_to_json(*path, in.nodes);
  } else {
    j["status"] = "infeasible";
    if (reject) j["reason"] = to_string(*reject);
  }
  j["algorithm"] = algo;
  j["window_start_s"] = format_s(g.window.start);
  j["window_end_s"] = format_s(g.window.end);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_export_lp(const std::string& plan_path, const std::string& nodes_path,
                  const std::string& request_path, double at_s, const std::string& out_path) {
  const PlanInputs in = load_plan(plan_path, nodes_path);
  const ApplicationRequest req = read_request_json(read_file(request_path), in.nodes);
  const std::vector<Snapshot> snaps = build_snapshots(in.plan, in.horizon, in.nodes);
  const Snapshot& g = snapshot_at(snaps, from_double_scaled(at_s, 6));
  const IlpModel model = build_model(g, req);
  write_file(out_path, export_lp(model, &in.nodes));
  std::cout << "wrote " << out_path << " (" << model.x_count() << " binary, " << model.y_count()
            << " integer variables, " << model.total_constraint_count() << " rows)\n";
  return kExitOk;
}

int cmd_simulate(const std::string& plan_path, const std::string& nodes_path,
                 const std::string& scenario_path, const std::string& sim_path,
                 const std::string& algos_csv, const std::string& sweep_kind,
                 const std::string& values_csv, const std::string& out_path,
                 const std::string& log_path, bool timing_off) {
  SimulationConfig base = sim_path.empty() ? SimulationConfig{} : read_sim_config(sim_path);
  base.measure_time = !timing_off;

  std::vector<Algorithm> algos;
  for (std::size_t start = 0, i = 0; i <= algos_csv.size(); ++i) {
    if (i == algos_csv.size() || algos_csv[i] == ',') {
      const std::string tok = algos_csv.substr(start, i - start);
      if (tok == "ksp") algos.push_back(Algorithm::Ksp);
      else if (tok == "vfsp") algos.push_back(Algorithm::Vfsp);
      else if (!tok.empty()) throw InputError("unknown algorithm " + tok);
      start = i + 1;
    }
  }
  if (algos.empty()) throw InputError("no algorithm selected");

  NodeTable nodes;
  std::vector<Snapshot> snaps;
  std::optional<ScenarioSpec> spec;
  if (!scenario_path.empty()) {
    spec = read_scenario_spec_json(read_file(scenario_path));
    base.n_functions = spec->n_functions;
    base.function_fraction = spec->function_fraction;
    base.call_cap = spec->call_cap;
    const Scenario sc = generate_scenario(*spec);
    nodes = sc.nodes;
    snaps = build_snapshots(sc.plan, sc.horizon, sc.nodes);
  } else {
    if (plan_path.empty() || nodes_path.empty())
      throw InputError("simulate needs either --scenario or both --plan and --nodes");
    PlanInputs in = load_plan(plan_path, nodes_path);
    nodes = std::move(in.nodes);
    base.n_functions = static_cast<std::int32_t>(nodes.functions.size());
    snaps = build_snapshots(in.plan, in.horizon, nodes);
  }

  std::vector<SweepRow> rows;
  if (sweep_kind == "none") {
    Rng req_rng = Rng(base.seed).derive("requests");
    const auto requests = generate_requests(base, nodes.ground_terminals(), req_rng);
    for (Algorithm a : algos) {
      SimulationConfig cfg = base;
      cfg.algorithm = a;
      rows.push_back({0.0, a, run_campaign(snaps, requests, cfg, &nodes.budgets)});
    }
  } else if (sweep_kind == "fraction") {
    std::vector<double> values = values_csv.empty() ? std::vector<double>{} : parse_values(values_csv);
    if (values.empty())
      for (int i = 1; i <= 20; ++i) values.push_back(0.05 * i);
    SweepContext ctx;
    ctx.snapshots = &snaps;
    rows = sweep(SweepParam::FunctionFraction, values, base, ctx, algos);
  } else if (sweep_kind == "satellites") {
    if (!spec) throw InputError("satellite sweep needs --scenario");
    std::vector<double> values = values_csv.empty()
                                     ? std::vector<double>{200, 400, 800, 1600}
                                     : parse_values(values_csv);
    SweepContext ctx;
    ctx.scenario_template = *spec;
    rows = sweep(SweepParam::SatelliteCount, values, base, ctx, algos);
  } else {
    throw InputError("unknown sweep kind " + sweep_kind);
  }

  write_file(out_path, metrics_csv(rows));
  if (!log_path.empty()) {
    std::string log;
    for (const SweepRow& r : rows) log += decision_log_jsonl(r.metrics, nodes);
    write_file(log_path, log);
  }
  std::cout << "wrote " << rows.size() << " metric rows to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-varying satellite network routing with on-board function placement"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  CLI::App* gen = app.add_subcommand("gen-scenario", "generate a synthetic scenario");
  gen->add_option("--config", config_path, "scenario config JSON")->required();
  gen->add_option("--out", out_dir, "output directory (default: $VFROUTE_OUT_DIR)");

  std::string plan_path, nodes_path, request_path, algo = "vfsp";
  double at_s = 0.0;
  std::int32_t k_max = KspConfig{}.k_max;
  bool no_shortcircuit = false;
  CLI::App* route = app.add_subcommand("route", "route one request on a contact plan");
  route->add_option("--plan", plan_path, "contact plan CSV")->required();
  route->add_option("--nodes", nodes_path, "node table JSON")->required();
  route->add_option("--request", request_path, "request JSON")->required();
  route->add_option("--algo", algo, "ksp | vfsp | oracle")
      ->check(CLI::IsMember({"ksp", "vfsp", "oracle"}));
  route->add_option("--at", at_s, "query time in seconds (default 0)");
  route->add_option("--k-max", k_max, "iteration cap for ksp");
  route->add_flag("--no-shortcircuit", no_shortcircuit, "disable the ksp walk-bound short-circuit");

  std::string lp_out;
  CLI::App* lp = app.add_subcommand("export-lp", "write the route ILP in LP text format");
  lp->add_option("--plan", plan_path, "contact plan CSV")->required();
  lp->add_option("--nodes", nodes_path, "node table JSON")->required();
  lp->add_option("--request", request_path, "request JSON")->required();
  lp->add_option("--at", at_s, "query time in seconds (default 0)");
  lp->add_option("--out", lp_out, "output LP file (default: $VFROUTE_OUT_DIR/model.lp)");

  std::string scenario_path, sim_path, algos_csv = "ksp,vfsp", sweep_kind = "none", values_csv,
              metrics_out, log_path;
  bool timing_off = false;
  CLI::App* sim = app.add_subcommand("simulate", "run an admission campaign");
  sim->add_option("--plan", plan_path, "contact plan CSV");
  sim->add_option("--nodes", nodes_path, "node table JSON");
  sim->add_option("--scenario", scenario_path, "scenario config JSON (generated on the fly)");
  sim->add_option("--sim", sim_path, "simulation config JSON");
  sim->add_option("--algos", algos_csv, "comma list: ksp,vfsp");
  sim->add_option("--sweep", sweep_kind, "none | fraction | satellites");
  sim->add_option("--values", values_csv, "comma list of sweep values");
  sim->add_option("--out", metrics_out, "metrics CSV output (default: $VFROUTE_OUT_DIR/metrics.csv)");
  sim->add_option("--log", log_path, "per-request decision log (JSONL)");
  sim->add_flag("--timing-off", timing_off, "pin runtime columns to zero for reproducible output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_scenario(config_path, resolve_out(out_dir, nullptr));
    if (route->parsed())
      return cmd_route(plan_path, nodes_path, request_path, algo, at_s, k_max, no_shortcircuit);
    if (lp->parsed())
      return cmd_export_lp(plan_path, nodes_path, request_path, at_s,
                           resolve_out(lp_out, "model.lp"));
    if (sim->parsed())
      return cmd_simulate(plan_path, nodes_path, scenario_path, sim_path, algos_csv, sweep_kind,
                          values_csv, resolve_out(metrics_out, "metrics.csv"), log_path,
                          timing_off);
  } catch (const InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
