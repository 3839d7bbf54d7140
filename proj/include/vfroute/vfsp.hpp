#pragma once

// Function-aware shortest path router.
//
// One pass over the links filters by capacity and collects the satellites
// able to serve the requested function; one Dijkstra from the source and one
// from the destination over the reversed links then price every candidate
// meeting point, and the best-sum satellite joins the two fragments into the
// final (possibly non-simple) path.  Per query this touches at most 3|L|
// links and pops at most 2|V| heap entries.
//
// Two refinements keep results exactly aligned with the route ILP:
//  - links into the source and out of the destination are never relaxed, so
//    the endpoints appear exactly once in the joined walk;
//  - if the two minimum fragments share a directed link (which the hop-order
//    variables cannot represent), the router falls back to the exhaustive
//    search on oracle-sized instances and to a disjoint recomputation on
//    larger ones.  The fallback is flagged in the diagnostics.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vfroute/dijkstra.hpp"
#include "vfroute/graph.hpp"
#include "vfroute/oracle.hpp"
#include "vfroute/path.hpp"

namespace vfroute {

struct VfspConfig {
  std::int32_t oracle_fallback_max_nodes = 14;
};

struct VfspDiag {
  std::optional<RejectReason> reject;
  NodeId function_node{-1};
  DelayNs fwd_delay = 0;
  DelayNs rev_delay = 0;
  std::int32_t functional_count = 0;
  std::int64_t links_touched = 0;
  std::int64_t heap_pops = 0;
  bool corner_fallback = false;   // minimum fragments shared a directed link
  std::string corner_mode;        // "oracle" or "repair" when corner_fallback
};

struct VfspResult {
  std::optional<RoutePath> path;
  VfspDiag diag;
};

// Fragment of a route: for the reverse side, links are expressed in the
// reversed graph (walking from the destination towards the meeting node).
struct PathFragment {
  std::vector<Link> links;
};

// Concatenates a forward fragment ending at `meet` with a reversed-graph
// fragment from the destination also ending at `meet`.
inline RoutePath join_paths(const PathFragment& fwd, const PathFragment& rev, NodeId meet) {
  if (fwd.links.empty() || fwd.links.back().to != meet)
    throw std::invalid_argument("join_paths: forward fragment does not end at the meeting node");
  if (rev.links.empty() || rev.links.back().to != meet)
    throw std::invalid_argument("join_paths: reverse fragment does not end at the meeting node");
  std::vector<Link> links = fwd.links;
  for (auto it = rev.links.rbegin(); it != rev.links.rend(); ++it)
    links.push_back({it->to, it->from, it->delay, it->capacity});
  return make_route_path(links, meet);
}

namespace detail {

inline RoutePath chain_to_path(const Snapshot& g, const std::vector<std::int32_t>& chain,
                               NodeId function_node) {
  std::vector<Link> links;
  links.reserve(chain.size());
  for (std::int32_t li : chain) links.push_back(g.links[static_cast<std::size_t>(li)]);
  return make_route_path(links, function_node);
}

}  // namespace detail

inline VfspResult route_vfsp(const Snapshot& g, const ApplicationRequest& r,
                             const SnapshotOverrides& ov = {}, const VfspConfig& cfg = {}) {
  validate_request(g, r);
  VfspResult res;
  VfspDiag& diag = res.diag;

  const auto L = static_cast<std::size_t>(g.links.size());
  std::vector<std::uint8_t> cap_ok(L, 0);
  std::vector<std::uint8_t> functional(static_cast<std::size_t>(g.node_count()), 0);
  for (std::size_t li = 0; li < L; ++li) {
    ++diag.links_touched;
    if (ov.capacity(g, static_cast<std::int32_t>(li)) < r.capacity) continue;
    cap_ok[li] = 1;
    const Link& l = g.links[li];
    for (NodeId end : {l.from, l.to})
      if (g.is_satellite(end) && ov.budget(g, end, r.function) >= 1)
        functional[static_cast<std::size_t>(end.value)] = 1;
  }
  std::vector<NodeId> candidates;
  for (std::int32_t v = 0; v < g.node_count(); ++v)
    if (functional[static_cast<std::size_t>(v)]) candidates.push_back(NodeId(v));
  diag.functional_count = static_cast<std::int32_t>(candidates.size());
  if (candidates.empty()) {
    diag.reject = RejectReason::NoFunctionalSatellite;  // no search needed
    return res;
  }

  const auto keep = [&](std::int32_t li) {
    const Link& l = g.links[static_cast<std::size_t>(li)];
    return cap_ok[static_cast<std::size_t>(li)] && l.to != r.source && l.from != r.dest;
  };
  DijkstraCounters counters;
  const DistanceTree fwd = detail::dijkstra_masked(g, r.source, Direction::Forward, keep, &counters);
  const DistanceTree rev = detail::dijkstra_masked(g, r.dest, Direction::Reverse, keep, &counters);
  diag.links_touched += counters.links_scanned;
  diag.heap_pops += counters.heap_pops;

  NodeId best(-1);
  DelayNs best_sum = kUnreachable;
  for (NodeId f : candidates) {  // ascending ids: strict < keeps the lowest on ties
    const DelayNs a = fwd.dist[static_cast<std::size_t>(f.value)];
    const DelayNs b = rev.dist[static_cast<std::size_t>(f.value)];
    if (a == kUnreachable || b == kUnreachable) continue;
    if (a + b < best_sum) {
      best_sum = a + b;
      best = f;
    }
  }
  if (best.value < 0) {
    diag.reject = RejectReason::NoPath;
    return res;
  }
  if (best_sum > r.delay_bound) {
    diag.reject = RejectReason::DelayBoundExceeded;
    return res;
  }

  const std::vector<std::int32_t> fwd_chain = tree_path_links(g, fwd, best);
  const std::vector<std::int32_t> rev_chain = reverse_tree_path_links(g, rev, best);
  bool disjoint = true;
  for (std::int32_t a : fwd_chain) {
    for (std::int32_t b : rev_chain) {
      if (a == b) {
        disjoint = false;
        break;
      }
    }
    if (!disjoint) break;
  }

  if (disjoint) {
    PathFragment f, b;
    for (std::int32_t li : fwd_chain) f.links.push_back(g.links[static_cast<std::size_t>(li)]);
    for (auto it = rev_chain.rbegin(); it != rev_chain.rend(); ++it) {
      const Link& l = g.links[static_cast<std::size_t>(*it)];
      b.links.push_back({l.to, l.from, l.delay, l.capacity});  // reversed-graph orientation
    }
    res.path = join_paths(f, b, best);
    diag.function_node = best;
    diag.fwd_delay = fwd.dist[static_cast<std::size_t>(best.value)];
    diag.rev_delay = rev.dist[static_cast<std::size_t>(best.value)];
    return res;
  }

  // Degenerate corner: both fragments need the same directed link, so the
  // joined walk would not be a representable path.
  diag.corner_fallback = true;
  if (g.node_count() <= cfg.oracle_fallback_max_nodes) {
    diag.corner_mode = "oracle";
    res.path = brute_force_optimal(g, r, {.max_nodes = cfg.oracle_fallback_max_nodes}, ov);
    if (res.path) {
      diag.function_node = res.path->function_node;
    } else {
      diag.reject = RejectReason::NoPath;
    }
    return res;
  }

  // Large instance: recompute one side while excluding the other side's
  // links.  Exact per candidate pair; across candidates this is a (rarely
  // reached) upper-bounding repair rather than a proven optimum.
  diag.corner_mode = "repair";
  struct Repair {
    DelayNs delay;
    NodeId fn;
    std::vector<std::int32_t> chain;
  };
  std::optional<Repair> best_repair;
  std::vector<std::pair<DelayNs, NodeId>> order;
  for (NodeId f : candidates) {
    const DelayNs a = fwd.dist[static_cast<std::size_t>(f.value)];
    const DelayNs b = rev.dist[static_cast<std::size_t>(f.value)];
    if (a == kUnreachable || b == kUnreachable) continue;
    if (a + b <= r.delay_bound) order.emplace_back(a + b, f);
  }
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second.value < y.second.value;
  });
  std::vector<std::uint8_t> banned(L, 0);
  for (const auto& [sum, f] : order) {
    if (best_repair && best_repair->delay <= sum) break;
    const std::vector<std::int32_t> head = tree_path_links(g, fwd, f);
    std::fill(banned.begin(), banned.end(), 0);
    for (std::int32_t li : head) banned[static_cast<std::size_t>(li)] = 1;
    const auto keep2 = [&](std::int32_t li) { return keep(li) && !banned[static_cast<std::size_t>(li)]; };
    const DistanceTree rev2 = detail::dijkstra_masked(g, r.dest, Direction::Reverse, keep2);
    const DelayNs tail_d = rev2.dist[static_cast<std::size_t>(f.value)];
    if (tail_d == kUnreachable) continue;
    const DelayNs total = fwd.dist[static_cast<std::size_t>(f.value)] + tail_d;
    if (total > r.delay_bound) continue;
    if (!best_repair || total < best_repair->delay) {
      std::vector<std::int32_t> chain = head;
      const std::vector<std::int32_t> tail = reverse_tree_path_links(g, rev2, f);
      chain.insert(chain.end(), tail.begin(), tail.end());
      best_repair = Repair{total, f, std::move(chain)};
    }
  }
  if (!best_repair) {
    diag.reject = RejectReason::NoPath;
    return res;
  }
  res.path = detail::chain_to_path(g, best_repair->chain, best_repair->fn);
  diag.function_node = best_repair->fn;
  return res;
}

}  // namespace vfroute
