#pragma once

// Single-source shortest delay paths over a snapshot.
//
// The heap is an indexed 4-ary min-heap with decrease-key, so each node is
// popped at most once per run; pops and edge scans are counted to verify the
// per-query operation bounds of the routers.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vfroute/graph.hpp"

namespace vfroute {

enum class Direction : std::uint8_t { Forward, Reverse };

struct DistanceTree {
  std::vector<DelayNs> dist;        // kUnreachable when not reached
  std::vector<std::int32_t> pred;   // link index used to reach the node, -1 at root
};

struct DijkstraCounters {
  std::int64_t heap_pops = 0;
  std::int64_t links_scanned = 0;
};

namespace detail {

// (dist, node-id) keyed min-heap over dense node indices.
class NodeHeap {
 public:
  explicit NodeHeap(std::size_t n, const std::vector<DelayNs>& dist)
      : dist_(dist), pos_(n, -1) {}

  bool empty() const { return heap_.empty(); }

  void push_or_update(std::int32_t node) {
    if (pos_[static_cast<std::size_t>(node)] < 0) {
      pos_[static_cast<std::size_t>(node)] = static_cast<std::int32_t>(heap_.size());
      heap_.push_back(node);
    }
    sift_up(pos_[static_cast<std::size_t>(node)]);
  }

  std::int32_t pop() {
    const std::int32_t top = heap_.front();
    pos_[static_cast<std::size_t>(top)] = -1;
    if (heap_.size() > 1) {
      heap_.front() = heap_.back();
      pos_[static_cast<std::size_t>(heap_.front())] = 0;
      heap_.pop_back();
      sift_down(0);
    } else {
      heap_.pop_back();
    }
    return top;
  }

 private:
  bool less(std::int32_t a, std::int32_t b) const {
    const DelayNs da = dist_[static_cast<std::size_t>(a)];
    const DelayNs db = dist_[static_cast<std::size_t>(b)];
    if (da != db) return da < db;
    return a < b;  // deterministic pop order on ties
  }

  void sift_up(std::int32_t i) {
    while (i > 0) {
      const std::int32_t parent = (i - 1) / 4;
      if (!less(heap_[static_cast<std::size_t>(i)], heap_[static_cast<std::size_t>(parent)])) break;
      swap_at(i, parent);
      i = parent;
    }
  }

  void sift_down(std::int32_t i) {
    const auto n = static_cast<std::int32_t>(heap_.size());
    for (;;) {
      std::int32_t best = i;
      const std::int32_t first = 4 * i + 1;
      for (std::int32_t c = first; c < std::min(first + 4, n); ++c)
        if (less(heap_[static_cast<std::size_t>(c)], heap_[static_cast<std::size_t>(best)])) best = c;
      if (best == i) break;
      swap_at(i, best);
      i = best;
    }
  }

  void swap_at(std::int32_t a, std::int32_t b) {
    std::swap(heap_[static_cast<std::size_t>(a)], heap_[static_cast<std::size_t>(b)]);
    pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(a)])] = a;
    pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(b)])] = b;
  }

  const std::vector<DelayNs>& dist_;
  std::vector<std::int32_t> heap_;
  std::vector<std::int32_t> pos_;
};

// Masked Dijkstra over the snapshot's CSR structure.  `keep(link_idx)` gates
// link eligibility; Forward walks out-links, Reverse walks in-links (i.e. the
// reversed graph).  Skipped links still count as scanned.
//
// When `settle_through` names a node, the run stops once every node at a
// distance up to that node's final distance has been settled; distances of
// farther nodes may be tentative, but any node on a shortest path to a
// settled node is itself settled, which is exactly what the lexicographic
// path walk below relies on.
template <typename KeepFn>
DistanceTree dijkstra_masked(const Snapshot& g, NodeId root, Direction dir, KeepFn&& keep,
                             DijkstraCounters* counters = nullptr,
                             std::int32_t settle_through = -1) {
  const auto n = static_cast<std::size_t>(g.node_count());
  DistanceTree t;
  t.dist.assign(n, kUnreachable);
  t.pred.assign(n, -1);
  t.dist[static_cast<std::size_t>(root.value)] = 0;

  bool target_settled = false;
  NodeHeap heap(n, t.dist);
  heap.push_or_update(root.value);
  while (!heap.empty()) {
    const std::int32_t u = heap.pop();
    if (counters) ++counters->heap_pops;
    const DelayNs du = t.dist[static_cast<std::size_t>(u)];
    if (target_settled && du > t.dist[static_cast<std::size_t>(settle_through)]) break;
    if (u == settle_through) target_settled = true;
    const auto scan = [&](std::int32_t link_idx, std::int32_t head) {
      if (counters) ++counters->links_scanned;
      if (!keep(link_idx)) return;
      const DelayNs cand = du + g.links[static_cast<std::size_t>(link_idx)].delay;
      if (cand < t.dist[static_cast<std::size_t>(head)]) {
        t.dist[static_cast<std::size_t>(head)] = cand;
        t.pred[static_cast<std::size_t>(head)] = link_idx;
        heap.push_or_update(head);
      }
    };
    if (dir == Direction::Forward) {
      const auto b = g.out_offsets[static_cast<std::size_t>(u)];
      const auto e = g.out_offsets[static_cast<std::size_t>(u) + 1];
      for (std::int32_t li = b; li < e; ++li) scan(li, g.links[static_cast<std::size_t>(li)].to.value);
    } else {
      const auto b = g.in_offsets[static_cast<std::size_t>(u)];
      const auto e = g.in_offsets[static_cast<std::size_t>(u) + 1];
      for (std::int32_t ii = b; ii < e; ++ii) {
        const std::int32_t li = g.in_links[static_cast<std::size_t>(ii)];
        scan(li, g.links[static_cast<std::size_t>(li)].from.value);
      }
    }
  }
  return t;
}

}  // namespace detail

// Exact shortest delay distances from `root` to every reachable node.
// Forward follows links as directed; Reverse follows them against their
// direction, which equals running Forward on reverse_graph(g).
inline DistanceTree shortest_path_tree(const Snapshot& g, NodeId root, Direction dir) {
  if (root.value < 0 || root.value >= g.node_count())
    throw std::invalid_argument("shortest_path_tree root not in snapshot");
  return detail::dijkstra_masked(g, root, dir, [](std::int32_t) { return true; });
}

// Reads the root->node link chain out of a Forward tree (oriented root-first).
inline std::vector<std::int32_t> tree_path_links(const Snapshot& g, const DistanceTree& t,
                                                 NodeId node) {
  std::vector<std::int32_t> chain;
  std::int32_t v = node.value;
  while (t.pred[static_cast<std::size_t>(v)] >= 0) {
    const std::int32_t li = t.pred[static_cast<std::size_t>(v)];
    chain.push_back(li);
    v = g.links[static_cast<std::size_t>(li)].from.value;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

// As above for a Reverse tree: returns the node->root chain in original link
// orientation, node-first.
inline std::vector<std::int32_t> reverse_tree_path_links(const Snapshot& g, const DistanceTree& t,
                                                         NodeId node) {
  std::vector<std::int32_t> chain;
  std::int32_t v = node.value;
  while (t.pred[static_cast<std::size_t>(v)] >= 0) {
    const std::int32_t li = t.pred[static_cast<std::size_t>(v)];
    chain.push_back(li);
    v = g.links[static_cast<std::size_t>(li)].to.value;
  }
  return chain;
}

namespace detail {

// Minimum-delay src->dst path whose node sequence is lexicographically least
// among all equal-delay shortest paths.  Works from the reverse distance
// field: walk forward, always taking the smallest-id next node that stays on
// a shortest path.  With positive delays the walk cannot revisit a node; the
// visited guard covers zero-delay edge cases.
template <typename KeepFn>
std::optional<std::vector<std::int32_t>> lex_shortest_path(const Snapshot& g, NodeId src,
                                                           NodeId dst, KeepFn&& keep,
                                                           DijkstraCounters* counters = nullptr) {
  const DistanceTree to_dst =
      dijkstra_masked(g, dst, Direction::Reverse, keep, counters, src.value);
  const DelayNs total = to_dst.dist[static_cast<std::size_t>(src.value)];
  if (total == kUnreachable) return std::nullopt;

  std::vector<std::int32_t> chain;
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(g.node_count()), 0);
  std::int32_t u = src.value;
  visited[static_cast<std::size_t>(u)] = 1;
  while (u != dst.value) {
    const auto b = g.out_offsets[static_cast<std::size_t>(u)];
    const auto e = g.out_offsets[static_cast<std::size_t>(u) + 1];
    std::int32_t chosen = -1;
    for (std::int32_t li = b; li < e; ++li) {  // CSR order = ascending head id
      if (!keep(li)) continue;
      const Link& l = g.links[static_cast<std::size_t>(li)];
      if (visited[static_cast<std::size_t>(l.to.value)]) continue;
      const DelayNs rest = to_dst.dist[static_cast<std::size_t>(l.to.value)];
      if (rest == kUnreachable) continue;
      if (l.delay + rest == to_dst.dist[static_cast<std::size_t>(u)]) {
        chosen = li;
        break;
      }
    }
    if (chosen < 0) {
      // Only reachable through an already-visited node (zero-delay cycle);
      // fall back to the predecessor tree, still deterministic.
      std::vector<std::int32_t> tree_chain = reverse_tree_path_links(g, to_dst, src);
      return tree_chain;
    }
    chain.push_back(chosen);
    u = g.links[static_cast<std::size_t>(chosen)].to.value;
    visited[static_cast<std::size_t>(u)] = 1;
  }
  return chain;
}

}  // namespace detail

}  // namespace vfroute
