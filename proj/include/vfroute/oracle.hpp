#pragma once

// Exhaustive minimum-delay search over small snapshots.
//
// Enumerates every walk from source to destination that uses each directed
// link at most once, visits each relay node at most twice and the endpoints
// exactly once, stays within the delay bound on capacity-eligible links, and
// passes through at least one satellite able to serve the requested function.
// Ties are broken by fewer hops, then by lexicographic node sequence, which
// pins a unique optimum for golden tests.  Intended as an oracle: refuses
// instances above a node limit.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vfroute/dijkstra.hpp"
#include "vfroute/graph.hpp"
#include "vfroute/path.hpp"

namespace vfroute {

struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleConfig {
  std::int32_t max_nodes = 14;
  bool simple_paths_only = false;  // restrict to simple paths (relay limit 1)
};

namespace detail {

struct OracleSearch {
  const Snapshot& g;
  const ApplicationRequest& req;
  const SnapshotOverrides& ov;
  std::int32_t relay_limit;

  std::vector<std::uint8_t> keep;        // capacity-eligible links
  std::vector<DelayNs> to_dst;           // lower bound: dist to destination
  std::vector<DelayNs> via_fn_to_dst;    // lower bound when no function node seen yet
  std::vector<std::int32_t> visits;
  std::vector<std::uint8_t> used;
  std::vector<std::int32_t> chain;

  bool have_best = false;
  std::vector<std::int32_t> best_chain;
  DelayNs best_delay = 0;

  OracleSearch(const Snapshot& g_, const ApplicationRequest& r_, const SnapshotOverrides& ov_,
               std::int32_t relay_limit_)
      : g(g_), req(r_), ov(ov_), relay_limit(relay_limit_) {}

  bool link_ok(std::int32_t li) const {
    if (!keep[static_cast<std::size_t>(li)]) return false;
    const Link& l = g.links[static_cast<std::size_t>(li)];
    if (l.to == req.source || l.from == req.dest) return false;  // endpoints stay unique
    return true;
  }

  bool is_function_node(std::int32_t v) const {
    const NodeId n(v);
    return g.is_satellite(n) && ov.budget(g, n, req.function) >= 1;
  }

  void prepare() {
    keep.assign(g.links.size(), 0);
    for (std::size_t i = 0; i < g.links.size(); ++i)
      keep[i] = ov.capacity(g, static_cast<std::int32_t>(i)) >= req.capacity ? 1 : 0;
    const auto eligible = [&](std::int32_t li) { return link_ok(li); };

    const DistanceTree rev = dijkstra_masked(g, req.dest, Direction::Reverse, eligible);
    to_dst = rev.dist;

    // For prefixes that have not seen a function node yet: cheapest completion
    // through any of them, min over f of dist(u->f) + dist(f->dst).
    via_fn_to_dst.assign(static_cast<std::size_t>(g.node_count()), kUnreachable);
    for (std::int32_t f = 0; f < g.node_count(); ++f) {
      if (!is_function_node(f)) continue;
      if (to_dst[static_cast<std::size_t>(f)] == kUnreachable) continue;
      const DistanceTree to_f = dijkstra_masked(g, NodeId(f), Direction::Reverse, eligible);
      for (std::int32_t u = 0; u < g.node_count(); ++u) {
        if (to_f.dist[static_cast<std::size_t>(u)] == kUnreachable) continue;
        const DelayNs bound = to_f.dist[static_cast<std::size_t>(u)] + to_dst[static_cast<std::size_t>(f)];
        via_fn_to_dst[static_cast<std::size_t>(u)] =
            std::min(via_fn_to_dst[static_cast<std::size_t>(u)], bound);
      }
    }

    visits.assign(static_cast<std::size_t>(g.node_count()), 0);
    used.assign(g.links.size(), 0);
    visits[static_cast<std::size_t>(req.source.value)] = 1;
  }

  // Lexicographic node-sequence comparison of two link chains from source.
  bool chain_less(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) const {
    const std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
      const std::int32_t va = g.links[static_cast<std::size_t>(a[i])].to.value;
      const std::int32_t vb = g.links[static_cast<std::size_t>(b[i])].to.value;
      if (va != vb) return va < vb;
    }
    return a.size() < b.size();
  }

  void offer(DelayNs delay) {
    if (!have_best || delay < best_delay ||
        (delay == best_delay && (chain.size() < best_chain.size() ||
                                 (chain.size() == best_chain.size() && chain_less(chain, best_chain))))) {
      have_best = true;
      best_delay = delay;
      best_chain = chain;
    }
  }

  void dfs(std::int32_t u, DelayNs delay, bool seen_function) {
    if (u == req.dest.value) {
      if (seen_function) offer(delay);
      return;
    }
    const DelayNs lb = seen_function ? to_dst[static_cast<std::size_t>(u)]
                                     : via_fn_to_dst[static_cast<std::size_t>(u)];
    if (lb == kUnreachable) return;
    if (delay + lb > req.delay_bound) return;
    if (have_best && delay + lb > best_delay) return;  // ties still explored

    const auto b = g.out_offsets[static_cast<std::size_t>(u)];
    const auto e = g.out_offsets[static_cast<std::size_t>(u) + 1];
    for (std::int32_t li = b; li < e; ++li) {
      if (used[static_cast<std::size_t>(li)] || !link_ok(li)) continue;
      const std::int32_t v = g.links[static_cast<std::size_t>(li)].to.value;
      if (v != req.dest.value && visits[static_cast<std::size_t>(v)] >= relay_limit) continue;
      used[static_cast<std::size_t>(li)] = 1;
      ++visits[static_cast<std::size_t>(v)];
      chain.push_back(li);
      dfs(v, delay + g.links[static_cast<std::size_t>(li)].delay,
          seen_function || is_function_node(v));
      chain.pop_back();
      --visits[static_cast<std::size_t>(v)];
      used[static_cast<std::size_t>(li)] = 0;
    }
  }
};

}  // namespace detail

// Exact optimum (or nothing when infeasible).  Throws InstanceTooLarge above
// cfg.max_nodes; infeasibility itself is a normal result, not an error.
inline std::optional<RoutePath> brute_force_optimal(const Snapshot& g, const ApplicationRequest& r,
                                                    const OracleConfig& cfg = {},
                                                    const SnapshotOverrides& ov = {}) {
  validate_request(g, r);
  if (g.node_count() > cfg.max_nodes)
    throw InstanceTooLarge("instance too large for exhaustive search (" +
                           std::to_string(g.node_count()) + " nodes, limit " +
                           std::to_string(cfg.max_nodes) + ")");

  detail::OracleSearch search(g, r, ov, cfg.simple_paths_only ? 1 : 2);
  search.prepare();
  search.dfs(r.source.value, 0, false);
  if (!search.have_best) return std::nullopt;

  std::vector<Link> links;
  links.reserve(search.best_chain.size());
  for (std::int32_t li : search.best_chain) links.push_back(g.links[static_cast<std::size_t>(li)]);

  // Designate the first function-capable satellite along the walk.
  NodeId fn_node(-1);
  for (const Link& l : links) {
    if (search.is_function_node(l.to.value)) {
      fn_node = l.to;
      break;
    }
  }
  return make_route_path(links, fn_node);
}

}  // namespace vfroute
