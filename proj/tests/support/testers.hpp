#pragma once

// Shared fixtures, random instance generation and independent reference
// implementations used across the test suites.  The references here are
// deliberately written with different algorithms than the library (Bellman-
// Ford instead of Dijkstra, plain DFS enumeration instead of deviation
// search) so they can serve as oracles for it.

#include <algorithm>
#include <vector>

#include "vfroute/graph.hpp"
#include "vfroute/path.hpp"
#include "vfroute/rng.hpp"

namespace vftest {

using namespace vfroute;

struct GraphBuilder {
  std::vector<NodeKind> kinds;
  std::vector<std::vector<std::int32_t>> budgets;
  std::vector<Link> links;

  GraphBuilder(int n_nodes, std::initializer_list<int> ground_terminals, int n_functions) {
    kinds.assign(static_cast<std::size_t>(n_nodes), NodeKind::Satellite);
    for (int g : ground_terminals) kinds[static_cast<std::size_t>(g)] = NodeKind::GroundTerminal;
    budgets.assign(static_cast<std::size_t>(n_nodes),
                   std::vector<std::int32_t>(static_cast<std::size_t>(n_functions), 0));
  }

  GraphBuilder& link(int a, int b, double delay_ms, double cap_mbps = 300.0) {
    links.push_back({NodeId(a), NodeId(b), static_cast<DelayNs>(delay_ms * kNsPerMs),
                     static_cast<CapacityKbps>(cap_mbps * kKbpsPerMbps)});
    return *this;
  }

  GraphBuilder& bilink(int a, int b, double delay_ms, double cap_mbps = 300.0) {
    link(a, b, delay_ms, cap_mbps);
    link(b, a, delay_ms, cap_mbps);
    return *this;
  }

  GraphBuilder& budget(int sat, int fn, int count) {
    budgets[static_cast<std::size_t>(sat)][static_cast<std::size_t>(fn)] = count;
    return *this;
  }

  Snapshot snap(TimeWindow w = {0, kUsPerS}) const { return Snapshot::make(w, kinds, budgets, links); }
};

inline ApplicationRequest request(int s, int d, int fn, double cap_mbps, double bound_ms) {
  ApplicationRequest r;
  r.source = NodeId(s);
  r.dest = NodeId(d);
  r.function = fn;
  r.capacity = static_cast<CapacityKbps>(cap_mbps * kKbpsPerMbps);
  r.delay_bound = static_cast<DelayNs>(bound_ms * kNsPerMs);
  return r;
}

// Spur fixture: nodes 0,1 are terminals, 2..4 satellites, only node 3 serves
// function 0, and it hangs off the single relay 2.  Best route doubles back
// through 2 (delay 24 ms); no simple route qualifies.
inline Snapshot g0() {
  GraphBuilder b(5, {0, 1}, 1);
  b.bilink(0, 2, 5).bilink(2, 1, 5).bilink(2, 3, 7).bilink(2, 4, 9);
  b.budget(3, 0, 1);
  return b.snap();
}
inline ApplicationRequest g0_request(double bound_ms = 30.0) { return request(0, 1, 0, 50, bound_ms); }

// Two disjoint relays: node 2 serves the function over a 10 ms route, node 3
// does not but is cheaper (8 ms).
inline Snapshot g1() {
  GraphBuilder b(4, {0, 1}, 1);
  b.bilink(0, 2, 5).bilink(2, 1, 5).bilink(0, 3, 4).bilink(3, 1, 4);
  b.budget(2, 0, 1);
  return b.snap();
}

struct RandomInstance {
  Snapshot g;
  ApplicationRequest r;
};

// Random digraph in the oracle's size range: 2 terminals + 3..10 satellites,
// arc density 0.3-0.6, attribute and budget draws wide enough that capacity
// filtering, delay rejection and missing functions all occur.
inline RandomInstance random_instance(Rng& rng, int min_nodes = 5, int max_nodes = 12,
                                      int n_functions = 2) {
  const int n = static_cast<int>(rng.uniform_int(min_nodes, max_nodes));
  GraphBuilder b(n, {0, 1}, n_functions);
  const double density = 0.3 + 0.3 * rng.uniform01();
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (!rng.chance(density)) continue;
      b.links.push_back({NodeId(u), NodeId(v), rng.uniform_int(5 * kNsPerMs, 15 * kNsPerMs),
                         rng.uniform_int(250 * kKbpsPerMbps, 400 * kKbpsPerMbps)});
    }
  for (int s = 2; s < n; ++s)
    for (int f = 0; f < n_functions; ++f)
      if (rng.chance(0.35)) b.budget(s, f, 1 + static_cast<int>(rng.bounded(2)));

  RandomInstance inst{b.snap(), {}};
  inst.r.source = NodeId(0);
  inst.r.dest = NodeId(1);
  inst.r.function = static_cast<FunctionId>(rng.bounded(static_cast<std::uint64_t>(n_functions)));
  inst.r.capacity = rng.uniform_int(260 * kKbpsPerMbps, 360 * kKbpsPerMbps);
  inst.r.delay_bound = rng.uniform_int(10 * kNsPerMs, 80 * kNsPerMs);
  return inst;
}

// Reference single-source distances by Bellman-Ford edge relaxation.
inline std::vector<DelayNs> bellman_ford(const Snapshot& g, NodeId root, bool reverse) {
  std::vector<DelayNs> dist(static_cast<std::size_t>(g.node_count()), kUnreachable);
  dist[static_cast<std::size_t>(root.value)] = 0;
  for (std::int32_t round = 0; round + 1 < g.node_count(); ++round) {
    bool changed = false;
    for (const Link& l : g.links) {
      const NodeId tail = reverse ? l.to : l.from;
      const NodeId head = reverse ? l.from : l.to;
      if (dist[static_cast<std::size_t>(tail.value)] == kUnreachable) continue;
      const DelayNs cand = dist[static_cast<std::size_t>(tail.value)] + l.delay;
      if (cand < dist[static_cast<std::size_t>(head.value)]) {
        dist[static_cast<std::size_t>(head.value)] = cand;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

struct SimplePath {
  DelayNs delay = 0;
  std::vector<std::int32_t> nodes;
};

// Every simple source->dest path by DFS, for comparing enumeration order on
// small graphs.
inline std::vector<SimplePath> all_simple_paths(const Snapshot& g, NodeId src, NodeId dst) {
  std::vector<SimplePath> out;
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(g.node_count()), 0);
  std::vector<std::int32_t> stack{src.value};
  DelayNs delay = 0;

  const auto dfs = [&](auto&& self, std::int32_t u) -> void {
    if (u == dst.value) {
      out.push_back({delay, stack});
      return;
    }
    visited[static_cast<std::size_t>(u)] = 1;
    for (const Link& l : g.out_links_of(NodeId(u))) {
      if (visited[static_cast<std::size_t>(l.to.value)]) continue;
      stack.push_back(l.to.value);
      delay += l.delay;
      self(self, l.to.value);
      delay -= l.delay;
      stack.pop_back();
    }
    visited[static_cast<std::size_t>(u)] = 0;
  };
  dfs(dfs, src.value);
  std::sort(out.begin(), out.end(), [](const SimplePath& a, const SimplePath& b) {
    if (a.delay != b.delay) return a.delay < b.delay;
    return a.nodes < b.nodes;
  });
  return out;
}

}  // namespace vftest
