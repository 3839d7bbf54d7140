#pragma once

// Time-varying topology: contact plans, per-window snapshot graphs and the
// graph transformations every router builds on (capacity filtering, link
// reversal, functional-satellite collection).
//
// A Snapshot is immutable after construction; all transformations return new
// values, so snapshots can be shared freely across concurrent queries.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vfroute/fixed.hpp"

namespace vfroute {

enum class NodeKind : std::uint8_t { Satellite, GroundTerminal };

using FunctionId = std::int32_t;

struct NodeId {
  std::int32_t value = -1;

  NodeId() = default;
  explicit constexpr NodeId(std::int32_t v) : value(v) {}
  friend constexpr bool operator==(NodeId a, NodeId b) { return a.value == b.value; }
  friend constexpr bool operator!=(NodeId a, NodeId b) { return a.value != b.value; }
  friend constexpr bool operator<(NodeId a, NodeId b) { return a.value < b.value; }
};

struct Link {
  NodeId from;
  NodeId to;
  DelayNs delay = 0;
  CapacityKbps capacity = 0;
};

struct TimeWindow {
  TimeUs start = 0;
  TimeUs end = 0;

  TimeUs length() const { return end - start; }
  bool contains(TimeUs t) const { return start <= t && t < end; }
};

struct ContactRecord {
  NodeId from;
  NodeId to;
  TimeUs start = 0;
  TimeUs end = 0;
  DelayNs delay = 0;
  CapacityKbps capacity = 0;
};

struct ContactPlan {
  std::vector<ContactRecord> records;
};

// Scenario-level node directory: names, kinds, the function namespace and
// the initial per-satellite call budgets.  Node ids are dense indices into
// this table and stay stable across every snapshot of the scenario.
struct NodeTable {
  std::vector<std::string> names;
  std::vector<NodeKind> kinds;
  std::vector<std::string> functions;
  std::vector<std::vector<std::int32_t>> budgets;  // [node][function]

  std::size_t size() const { return names.size(); }

  std::optional<NodeId> find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return NodeId(static_cast<std::int32_t>(i));
    return std::nullopt;
  }

  std::optional<FunctionId> find_function(std::string_view name) const {
    for (std::size_t i = 0; i < functions.size(); ++i)
      if (functions[i] == name) return static_cast<FunctionId>(i);
    return std::nullopt;
  }

  std::vector<NodeId> ground_terminals() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < kinds.size(); ++i)
      if (kinds[i] == NodeKind::GroundTerminal) out.push_back(NodeId(static_cast<std::int32_t>(i)));
    return out;
  }

  std::vector<NodeId> satellites() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < kinds.size(); ++i)
      if (kinds[i] == NodeKind::Satellite) out.push_back(NodeId(static_cast<std::int32_t>(i)));
    return out;
  }
};

// One topology window.  Links are unique per (from,to), sorted by (from,to),
// and indexable both by out-neighbor range and via the in-link index.
struct Snapshot {
  TimeWindow window;
  std::vector<NodeKind> kinds;
  std::vector<std::vector<std::int32_t>> budgets;  // [node][function]
  std::vector<Link> links;                         // sorted by (from,to)
  std::vector<std::int32_t> out_offsets;           // size |V|+1, ranges into links
  std::vector<std::int32_t> in_offsets;            // size |V|+1, ranges into in_links
  std::vector<std::int32_t> in_links;              // link indices sorted by (to,from)

  std::int32_t node_count() const { return static_cast<std::int32_t>(kinds.size()); }
  std::int32_t link_count() const { return static_cast<std::int32_t>(links.size()); }

  bool is_satellite(NodeId n) const { return kinds[static_cast<std::size_t>(n.value)] == NodeKind::Satellite; }

  std::int32_t budget(NodeId n, FunctionId f) const {
    const auto& row = budgets[static_cast<std::size_t>(n.value)];
    return f >= 0 && static_cast<std::size_t>(f) < row.size() ? row[static_cast<std::size_t>(f)] : 0;
  }

  std::span<const Link> out_links_of(NodeId n) const {
    const auto b = out_offsets[static_cast<std::size_t>(n.value)];
    const auto e = out_offsets[static_cast<std::size_t>(n.value) + 1];
    return {links.data() + b, static_cast<std::size_t>(e - b)};
  }

  // Index of link (from,to) in `links`, or -1.
  std::int32_t find_link(NodeId from, NodeId to) const {
    auto lo = out_offsets[static_cast<std::size_t>(from.value)];
    auto hi = out_offsets[static_cast<std::size_t>(from.value) + 1];
    while (lo < hi) {
      const auto mid = lo + (hi - lo) / 2;
      if (links[static_cast<std::size_t>(mid)].to.value < to.value)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < out_offsets[static_cast<std::size_t>(from.value) + 1] &&
        links[static_cast<std::size_t>(lo)].to == to)
      return lo;
    return -1;
  }

  static Snapshot make(TimeWindow window, std::vector<NodeKind> kinds,
                       std::vector<std::vector<std::int32_t>> budgets, std::vector<Link> links) {
    Snapshot g;
    g.window = window;
    g.kinds = std::move(kinds);
    g.budgets = std::move(budgets);
    if (g.budgets.size() != g.kinds.size())
      throw std::invalid_argument("budget table size does not match node count");
    const auto n = static_cast<std::int32_t>(g.kinds.size());
    for (const Link& l : links) {
      if (l.from.value < 0 || l.from.value >= n || l.to.value < 0 || l.to.value >= n)
        throw std::invalid_argument("link endpoint out of range");
      if (l.from == l.to) throw std::invalid_argument("self-loop link");
      if (l.delay < 0 || l.capacity < 0) throw std::invalid_argument("negative link attribute");
    }
    std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
      if (a.from.value != b.from.value) return a.from.value < b.from.value;
      return a.to.value < b.to.value;
    });
    for (std::size_t i = 1; i < links.size(); ++i)
      if (links[i - 1].from == links[i].from && links[i - 1].to == links[i].to)
        throw std::invalid_argument("duplicate directed link");
    g.links = std::move(links);

    g.out_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const Link& l : g.links) ++g.out_offsets[static_cast<std::size_t>(l.from.value) + 1];
    for (std::size_t i = 1; i < g.out_offsets.size(); ++i) g.out_offsets[i] += g.out_offsets[i - 1];

    g.in_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const Link& l : g.links) ++g.in_offsets[static_cast<std::size_t>(l.to.value) + 1];
    for (std::size_t i = 1; i < g.in_offsets.size(); ++i) g.in_offsets[i] += g.in_offsets[i - 1];
    g.in_links.resize(g.links.size());
    std::vector<std::int32_t> cursor(g.in_offsets.begin(), g.in_offsets.end() - 1);
    for (std::int32_t li = 0; li < g.link_count(); ++li) {
      const auto to = static_cast<std::size_t>(g.links[static_cast<std::size_t>(li)].to.value);
      g.in_links[static_cast<std::size_t>(cursor[to]++)] = li;
    }
    return g;
  }
};

// Live remaining-call counts; the simulator passes this to routers so a
// snapshot never has to be copied per query.
struct BudgetTable {
  std::vector<std::vector<std::int32_t>> remaining;  // [node][function]

  std::int32_t get(NodeId n, FunctionId f) const {
    const auto& row = remaining[static_cast<std::size_t>(n.value)];
    return f >= 0 && static_cast<std::size_t>(f) < row.size() ? row[static_cast<std::size_t>(f)] : 0;
  }
};

// Cumulative capacity holds keyed by directed node pair.
struct CapacityReservations {
  std::unordered_map<std::uint64_t, CapacityKbps> held;

  static std::uint64_t key(NodeId from, NodeId to) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from.value)) << 32) |
           static_cast<std::uint32_t>(to.value);
  }
  void add(NodeId from, NodeId to, CapacityKbps amount) { held[key(from, to)] += amount; }
  CapacityKbps of(NodeId from, NodeId to) const {
    auto it = held.find(key(from, to));
    return it == held.end() ? 0 : it->second;
  }
};

// Optional per-query overrides applied on top of a snapshot.
struct SnapshotOverrides {
  const BudgetTable* budgets = nullptr;
  const CapacityReservations* reservations = nullptr;

  std::int32_t budget(const Snapshot& g, NodeId n, FunctionId f) const {
    return budgets ? budgets->get(n, f) : g.budget(n, f);
  }
  CapacityKbps capacity(const Snapshot& g, std::int32_t link_idx) const {
    const Link& l = g.links[static_cast<std::size_t>(link_idx)];
    if (!reservations) return l.capacity;
    const CapacityKbps c = l.capacity - reservations->of(l.from, l.to);
    return c > 0 ? c : 0;
  }
};

// Splits the horizon at every contact start/end event and emits one snapshot
// per maximal interval between consecutive events; within a window the link
// set and attributes are constant.  Records fully outside the horizon are
// ignored; a record must cover a window entirely to appear in it.  When the
// same directed pair is covered by several records in one window, the higher
// capacity wins, ties going to the lower delay.
inline std::vector<Snapshot> build_snapshots(const ContactPlan& plan, TimeWindow horizon,
                                             const NodeTable& nodes) {
  if (horizon.start >= horizon.end) throw std::invalid_argument("empty time horizon");

  struct Clipped {
    TimeUs start, end;
    std::int32_t record;
  };
  std::vector<Clipped> active_src;
  for (std::size_t i = 0; i < plan.records.size(); ++i) {
    const ContactRecord& r = plan.records[i];
    if (r.start >= r.end) throw std::invalid_argument("contact record with non-positive duration");
    const TimeUs s = std::max(r.start, horizon.start);
    const TimeUs e = std::min(r.end, horizon.end);
    if (s < e) active_src.push_back({s, e, static_cast<std::int32_t>(i)});
  }

  std::vector<TimeUs> boundaries{horizon.start, horizon.end};
  for (const Clipped& c : active_src) {
    boundaries.push_back(c.start);
    boundaries.push_back(c.end);
  }
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());

  // Sweep: every clipped start/end is a boundary, so membership only changes
  // at boundaries and each active record covers the whole next window.
  std::vector<Clipped> by_start = active_src;
  std::sort(by_start.begin(), by_start.end(), [](const Clipped& a, const Clipped& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.record < b.record;
  });

  std::vector<Snapshot> out;
  std::vector<std::int32_t> active;  // record indices
  std::size_t next_start = 0;
  for (std::size_t w = 0; w + 1 < boundaries.size(); ++w) {
    const TimeWindow window{boundaries[w], boundaries[w + 1]};
    while (next_start < by_start.size() && by_start[next_start].start == window.start)
      active.push_back(by_start[next_start++].record);
    std::erase_if(active, [&](std::int32_t ri) {
      return std::min(plan.records[static_cast<std::size_t>(ri)].end, horizon.end) <= window.start;
    });

    // Deduplicate per directed pair: higher capacity, then lower delay wins.
    std::unordered_map<std::uint64_t, Link> best;
    for (std::int32_t ri : active) {
      const ContactRecord& r = plan.records[static_cast<std::size_t>(ri)];
      const Link cand{r.from, r.to, r.delay, r.capacity};
      const auto k = CapacityReservations::key(r.from, r.to);
      auto [it, inserted] = best.try_emplace(k, cand);
      if (!inserted) {
        Link& cur = it->second;
        if (cand.capacity > cur.capacity ||
            (cand.capacity == cur.capacity && cand.delay < cur.delay))
          cur = cand;
      }
    }
    std::vector<Link> links;
    links.reserve(best.size());
    for (const auto& [k, l] : best) links.push_back(l);
    out.push_back(Snapshot::make(window, nodes.kinds, nodes.budgets, std::move(links)));
  }
  return out;
}

// Keeps exactly the links with capacity >= c_req; nodes are preserved.
inline Snapshot filter_by_capacity(const Snapshot& g, CapacityKbps c_req) {
  if (c_req < 0) throw std::invalid_argument("negative capacity requirement");
  std::vector<Link> kept;
  kept.reserve(g.links.size());
  for (const Link& l : g.links)
    if (l.capacity >= c_req) kept.push_back(l);
  return Snapshot::make(g.window, g.kinds, g.budgets, std::move(kept));
}

// Flips every directed link; attributes are preserved, so double reversal is
// the identity.
inline Snapshot reverse_graph(const Snapshot& g) {
  std::vector<Link> flipped;
  flipped.reserve(g.links.size());
  for (const Link& l : g.links) flipped.push_back({l.to, l.from, l.delay, l.capacity});
  return Snapshot::make(g.window, g.kinds, g.budgets, std::move(flipped));
}

// Satellites able to serve function f (budget >= 1) that touch at least one
// link of g; collected the same way the routers do during link filtering.
inline std::vector<NodeId> functional_satellites(const Snapshot& g, FunctionId f,
                                                 const SnapshotOverrides& ov = {}) {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.node_count()), 0);
  for (const Link& l : g.links) {
    seen[static_cast<std::size_t>(l.from.value)] = 1;
    seen[static_cast<std::size_t>(l.to.value)] = 1;
  }
  std::vector<NodeId> out;
  for (std::int32_t v = 0; v < g.node_count(); ++v) {
    const NodeId n(v);
    if (seen[static_cast<std::size_t>(v)] && g.is_satellite(n) && ov.budget(g, n, f) >= 1)
      out.push_back(n);
  }
  return out;
}

}  // namespace vfroute
