#pragma once

// Online admission campaign: generate a request sequence, route each request
// on the snapshot covering its arrival time with the live resource state
// applied, account function-call budgets (and optional capacity holds), and
// aggregate acceptance/delay/hop/runtime metrics.
//
// A campaign is sequential by nature (the resource state is a serial
// dependency); independent campaigns are freely parallelizable.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfroute/constellation.hpp"
#include "vfroute/graph.hpp"
#include "vfroute/ksp.hpp"
#include "vfroute/path.hpp"
#include "vfroute/rng.hpp"
#include "vfroute/vfsp.hpp"

namespace vfroute {

enum class Algorithm : std::uint8_t { Ksp, Vfsp };

inline const char* to_string(Algorithm a) { return a == Algorithm::Ksp ? "ksp" : "vfsp"; }

enum class CapacityReservationMode : std::uint8_t { None, UntilHorizonEnd };

struct SimulationConfig {
  std::int32_t n_requests = 5000;
  CapacityKbps capacity_lo = 5 * kKbpsPerMbps;
  CapacityKbps capacity_hi = 100 * kKbpsPerMbps;
  DelayNs delay_lo = 20 * kNsPerMs;
  DelayNs delay_hi = 150 * kNsPerMs;
  std::int32_t n_functions = 3;
  double function_fraction = 0.10;
  std::int32_t call_cap = 1;
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::Vfsp;
  CapacityReservationMode reservation = CapacityReservationMode::None;
  KspConfig ksp;
  bool measure_time = true;  // false pins the runtime columns to zero
};

// Live remaining resources during a campaign.
struct ResourceState {
  BudgetTable budgets;
  CapacityReservations reservations;

  static ResourceState from_budgets(std::vector<std::vector<std::int32_t>> initial) {
    ResourceState s;
    s.budgets.remaining = std::move(initial);
    return s;
  }
};

// Uniform request stream: endpoint pair drawn without replacement per
// request, capacity / delay bound / function uniform over their ranges.
inline std::vector<ApplicationRequest> generate_requests(const SimulationConfig& cfg,
                                                         std::span<const NodeId> gts, Rng& rng) {
  if (gts.size() < 2) throw std::invalid_argument("need at least two ground terminals");
  if (cfg.capacity_lo > cfg.capacity_hi || cfg.delay_lo > cfg.delay_hi)
    throw std::invalid_argument("empty request attribute range");
  if (cfg.n_functions < 1) throw std::invalid_argument("need at least one function");
  std::vector<ApplicationRequest> out;
  out.reserve(static_cast<std::size_t>(cfg.n_requests));
  for (std::int32_t i = 0; i < cfg.n_requests; ++i) {
    const auto a = static_cast<std::size_t>(rng.bounded(gts.size()));
    auto b = static_cast<std::size_t>(rng.bounded(gts.size() - 1));
    if (b >= a) ++b;
    ApplicationRequest r;
    r.source = gts[a];
    r.dest = gts[b];
    r.function = static_cast<FunctionId>(rng.bounded(static_cast<std::uint64_t>(cfg.n_functions)));
    r.capacity = rng.uniform_int(cfg.capacity_lo, cfg.capacity_hi);
    r.delay_bound = rng.uniform_int(cfg.delay_lo, cfg.delay_hi);
    out.push_back(r);
  }
  return out;
}

struct DecisionRecord {
  std::int32_t index = 0;
  TimeUs arrival = 0;
  ApplicationRequest request;
  bool accepted = false;
  RejectReason reject = RejectReason::NoPath;  // meaningful when rejected
  DelayNs delay = 0;
  std::int32_t hops = 0;
  NodeId function_node{-1};
  std::vector<NodeId> path_nodes;
  std::int64_t query_us = 0;
  std::int32_t paths_examined = 0;  // KSP only
};

struct Metrics {
  std::int64_t n_requests = 0;
  std::int64_t n_accepted = 0;
  DelayNs sum_delay = 0;       // over accepted
  std::int64_t sum_hops = 0;   // over accepted
  std::vector<std::int64_t> query_us;
  std::vector<DecisionRecord> log;
  std::vector<std::vector<std::int32_t>> final_budgets;  // remaining calls at horizon end

  double acceptance_ratio() const {
    return n_requests == 0 ? 0.0 : static_cast<double>(n_accepted) / static_cast<double>(n_requests);
  }
  // Scaled integer forms for exact CSV rendering (6 decimal digits).
  std::int64_t acceptance_ratio_micro() const {
    return n_requests == 0 ? 0 : (n_accepted * 1'000'000 + n_requests / 2) / n_requests;
  }
  std::int64_t mean_delay_ns() const {
    return n_accepted == 0 ? 0 : (sum_delay + n_accepted / 2) / n_accepted;
  }
  std::int64_t mean_hops_micro() const {
    return n_accepted == 0 ? 0 : (sum_hops * 1'000'000 + n_accepted / 2) / n_accepted;
  }
  std::int64_t mean_query_us() const {
    if (query_us.empty()) return 0;
    std::int64_t total = 0;
    for (std::int64_t q : query_us) total += q;
    return (total + static_cast<std::int64_t>(query_us.size()) / 2) /
           static_cast<std::int64_t>(query_us.size());
  }
  std::int64_t p95_query_us() const {
    if (query_us.empty()) return 0;
    std::vector<std::int64_t> sorted = query_us;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t idx = (sorted.size() * 95 + 99) / 100;  // ceil(0.95 n)
    return sorted[std::min(idx == 0 ? 0 : idx - 1, sorted.size() - 1)];
  }
};

namespace detail {

inline std::size_t snapshot_for(std::span<const Snapshot> snaps, TimeUs t) {
  std::size_t lo = 0, hi = snaps.size();
  while (lo + 1 < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (snaps[mid].window.start <= t) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace detail

// Routes the request stream in order.  Arrival times are spread evenly over
// the horizon covered by the snapshots (midpoint rule), each request routed
// on the snapshot whose window contains its arrival.  Per-query wall time
// wraps the router call only.  Accepted paths are re-validated against the
// resource view they were computed on before any state is mutated.
inline Metrics run_campaign(std::span<const Snapshot> snapshots,
                            std::span<const ApplicationRequest> requests,
                            const SimulationConfig& cfg,
                            const std::vector<std::vector<std::int32_t>>* initial_budgets = nullptr) {
  if (snapshots.empty()) throw std::invalid_argument("campaign needs at least one snapshot");
  ResourceState state = ResourceState::from_budgets(
      initial_budgets ? *initial_budgets : snapshots.front().budgets);

  const TimeUs h_start = snapshots.front().window.start;
  const TimeUs h_end = snapshots.back().window.end;
  const auto n = static_cast<std::int64_t>(requests.size());

  Metrics m;
  m.n_requests = n;
  m.query_us.reserve(requests.size());
  m.log.reserve(requests.size());

  for (std::int64_t i = 0; i < n; ++i) {
    const ApplicationRequest& r = requests[static_cast<std::size_t>(i)];
    const TimeUs arrival = h_start + ((2 * i + 1) * (h_end - h_start)) / (2 * n);
    const Snapshot& g = snapshots[detail::snapshot_for(snapshots, arrival)];
    const SnapshotOverrides view{
        &state.budgets,
        cfg.reservation == CapacityReservationMode::UntilHorizonEnd ? &state.reservations : nullptr};

    DecisionRecord rec;
    rec.index = static_cast<std::int32_t>(i);
    rec.arrival = arrival;
    rec.request = r;

    std::optional<RoutePath> path;
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.algorithm == Algorithm::Vfsp) {
      VfspResult vr = route_vfsp(g, r, view);
      path = std::move(vr.path);
      if (vr.diag.reject) rec.reject = *vr.diag.reject;
    } else {
      KspResult kr = route_ksp(g, r, cfg.ksp, view);
      path = std::move(kr.path);
      rec.paths_examined = kr.trace.paths_examined;
      if (kr.trace.reject) rec.reject = *kr.trace.reject;
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.query_us = cfg.measure_time
                       ? std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count()
                       : 0;
    m.query_us.push_back(rec.query_us);

    if (path) {
      validate_route_path(*path, g, r, view);  // contract check at decision time
      const std::int32_t left = state.budgets.get(path->function_node, r.function);
      if (left < 1) throw std::logic_error("router consumed an exhausted budget");
      state.budgets.remaining[static_cast<std::size_t>(path->function_node.value)]
                             [static_cast<std::size_t>(r.function)] = left - 1;
      if (cfg.reservation == CapacityReservationMode::UntilHorizonEnd)
        for (const Link& l : path->links) state.reservations.add(l.from, l.to, r.capacity);

      rec.accepted = true;
      rec.delay = path->total_delay;
      rec.hops = path->hops;
      rec.function_node = path->function_node;
      rec.path_nodes = path->node_sequence();
      ++m.n_accepted;
      m.sum_delay += path->total_delay;
      m.sum_hops += path->hops;
    }
    m.log.push_back(std::move(rec));
  }
  m.final_budgets = std::move(state.budgets.remaining);
  return m;
}

enum class SweepParam : std::uint8_t { FunctionFraction, SatelliteCount };

struct SweepRow {
  double param_value = 0.0;
  Algorithm algorithm = Algorithm::Vfsp;
  Metrics metrics;
};

struct SweepContext {
  // FunctionFraction: campaigns run over these prebuilt snapshots, with
  // budgets reassigned per point (same seed, so subsets nest as the
  // fraction grows).
  const std::vector<Snapshot>* snapshots = nullptr;
  // SatelliteCount: scenarios are regenerated from this template per value.
  std::optional<ScenarioSpec> scenario_template;
};

inline std::vector<SweepRow> sweep(SweepParam param, std::span<const double> values,
                                   const SimulationConfig& base, const SweepContext& ctx,
                                   std::span<const Algorithm> algorithms) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<SweepRow> rows;

  if (param == SweepParam::FunctionFraction) {
    if (!ctx.snapshots || ctx.snapshots->empty())
      throw std::invalid_argument("fraction sweep needs prebuilt snapshots");
    const Snapshot& first = ctx.snapshots->front();
    std::vector<NodeId> sats, gts;
    for (std::int32_t v = 0; v < first.node_count(); ++v)
      (first.is_satellite(NodeId(v)) ? sats : gts).push_back(NodeId(v));

    Rng req_rng = Rng(base.seed).derive("requests");
    const std::vector<ApplicationRequest> requests = generate_requests(base, gts, req_rng);

    for (double fraction : values) {
      SimulationConfig cfg = base;
      cfg.function_fraction = fraction;
      Rng fn_rng = Rng(base.seed).derive("functions");
      const auto budgets = assign_functions(sats, first.node_count(), cfg.n_functions, fraction,
                                            cfg.call_cap, fn_rng);
      for (Algorithm algo : algorithms) {
        cfg.algorithm = algo;
        rows.push_back({fraction, algo, run_campaign(*ctx.snapshots, requests, cfg, &budgets)});
      }
    }
    return rows;
  }

  if (!ctx.scenario_template) throw std::invalid_argument("satellite sweep needs a scenario template");
  for (double value : values) {
    ScenarioSpec spec = *ctx.scenario_template;
    spec.n_functions = base.n_functions;
    spec.function_fraction = base.function_fraction;
    spec.call_cap = base.call_cap;
    spec.walker.n_sats = static_cast<std::int32_t>(value);
    spec.walker.n_planes = default_plane_count(spec.walker.n_sats);
    const Scenario sc = generate_scenario(spec);
    const std::vector<Snapshot> snaps = build_snapshots(sc.plan, sc.horizon, sc.nodes);
    Rng req_rng = Rng(base.seed).derive("requests");
    SimulationConfig cfg = base;
    const std::vector<ApplicationRequest> requests =
        generate_requests(cfg, sc.nodes.ground_terminals(), req_rng);
    for (Algorithm algo : algorithms) {
      cfg.algorithm = algo;
      rows.push_back({value, algo, run_campaign(snaps, requests, cfg, &sc.nodes.budgets)});
    }
  }
  return rows;
}

}  // namespace vfroute
