#pragma once

// Application requests and allocated route paths.
//
// A RoutePath may be non-simple: relay nodes can appear twice (out to the
// function-hosting satellite and back), source and destination exactly once.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfroute/graph.hpp"

namespace vfroute {

struct ApplicationRequest {
  NodeId source;
  NodeId dest;
  FunctionId function = 0;
  CapacityKbps capacity = 0;   // required bandwidth
  DelayNs delay_bound = 0;     // maximum acceptable end-to-end delay
};

inline void validate_request(const Snapshot& g, const ApplicationRequest& r) {
  const auto n = g.node_count();
  if (r.source.value < 0 || r.source.value >= n || r.dest.value < 0 || r.dest.value >= n)
    throw std::invalid_argument("request endpoint not in snapshot");
  if (r.source == r.dest) throw std::invalid_argument("request source equals destination");
  if (g.is_satellite(r.source) || g.is_satellite(r.dest))
    throw std::invalid_argument("request endpoints must be ground terminals");
  if (r.capacity <= 0) throw std::invalid_argument("request capacity must be positive");
  if (r.delay_bound <= 0) throw std::invalid_argument("request delay bound must be positive");
}

struct RoutePath {
  std::vector<Link> links;  // ordered source -> dest
  NodeId function_node;     // satellite designated to serve the function
  DelayNs total_delay = 0;
  std::int32_t hops = 0;
  CapacityKbps min_capacity = 0;

  std::vector<NodeId> node_sequence() const {
    std::vector<NodeId> seq;
    if (links.empty()) return seq;
    seq.reserve(links.size() + 1);
    seq.push_back(links.front().from);
    for (const Link& l : links) seq.push_back(l.to);
    return seq;
  }
};

inline RoutePath make_route_path(std::span<const Link> links, NodeId function_node) {
  if (links.empty()) throw std::invalid_argument("route path needs at least one link");
  RoutePath p;
  p.links.assign(links.begin(), links.end());
  p.function_node = function_node;
  p.min_capacity = links.front().capacity;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (i > 0 && links[i - 1].to != links[i].from)
      throw std::invalid_argument("route path links do not chain");
    p.total_delay += links[i].delay;
    p.min_capacity = std::min(p.min_capacity, links[i].capacity);
  }
  p.hops = static_cast<std::int32_t>(links.size());
  return p;
}

// Full recheck of a path against a snapshot (plus live budget/capacity
// state): link existence and attributes, visit-count rules, delay bound,
// capacity and function coverage.  Used by the simulator on every accepted
// path and throughout the tests.
inline void validate_route_path(const RoutePath& p, const Snapshot& g, const ApplicationRequest& r,
                                const SnapshotOverrides& ov = {}) {
  if (p.links.empty()) throw std::logic_error("empty route path");
  if (p.links.front().from != r.source) throw std::logic_error("path does not start at source");
  if (p.links.back().to != r.dest) throw std::logic_error("path does not end at destination");

  std::vector<std::int32_t> visits(static_cast<std::size_t>(g.node_count()), 0);
  std::vector<std::uint8_t> used(g.links.size(), 0);
  ++visits[static_cast<std::size_t>(r.source.value)];
  DelayNs delay = 0;
  for (std::size_t i = 0; i < p.links.size(); ++i) {
    const Link& l = p.links[i];
    if (i > 0 && p.links[i - 1].to != l.from) throw std::logic_error("path links do not chain");
    const std::int32_t idx = g.find_link(l.from, l.to);
    if (idx < 0) throw std::logic_error("path uses a link absent from the snapshot");
    const Link& gl = g.links[static_cast<std::size_t>(idx)];
    if (gl.delay != l.delay || gl.capacity != l.capacity)
      throw std::logic_error("path link attributes do not match the snapshot");
    if (used[static_cast<std::size_t>(idx)]) throw std::logic_error("path repeats a directed link");
    used[static_cast<std::size_t>(idx)] = 1;
    if (ov.capacity(g, idx) < r.capacity) throw std::logic_error("path link below required capacity");
    delay += l.delay;
    ++visits[static_cast<std::size_t>(l.to.value)];
  }
  if (delay != p.total_delay) throw std::logic_error("path delay total is inconsistent");
  if (delay > r.delay_bound) throw std::logic_error("path exceeds the delay bound");
  if (visits[static_cast<std::size_t>(r.source.value)] != 1)
    throw std::logic_error("source revisited");
  if (visits[static_cast<std::size_t>(r.dest.value)] != 1)
    throw std::logic_error("destination revisited");
  for (std::int32_t v = 0; v < g.node_count(); ++v) {
    if (NodeId(v) == r.source || NodeId(v) == r.dest) continue;
    if (visits[static_cast<std::size_t>(v)] > 2) throw std::logic_error("relay visited more than twice");
  }
  if (p.function_node.value < 0 || !g.is_satellite(p.function_node) ||
      visits[static_cast<std::size_t>(p.function_node.value)] == 0)
    throw std::logic_error("function node is not a satellite on the path");
  if (ov.budget(g, p.function_node, r.function) < 1)
    throw std::logic_error("function node has no remaining call budget");
}

enum class RejectReason : std::uint8_t {
  NoFunctionalSatellite,  // no satellite can serve the function at all
  NoPath,                 // destination unreachable through eligible links
  DelayBoundExceeded,     // best candidate misses the delay bound
  SearchExhausted,        // enumeration ran out of candidate paths
  IterationCapReached,    // iteration guard tripped
};

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::NoFunctionalSatellite: return "no_functional_satellite";
    case RejectReason::NoPath: return "no_path";
    case RejectReason::DelayBoundExceeded: return "delay_bound_exceeded";
    case RejectReason::SearchExhausted: return "search_exhausted";
    case RejectReason::IterationCapReached: return "iteration_cap_reached";
  }
  return "unknown";
}

}  // namespace vfroute
