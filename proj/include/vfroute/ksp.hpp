#pragma once

// K-shortest-paths router: enumerate simple delay paths on the capacity-
// filtered snapshot in nondecreasing delay order (Yen's deviation scheme)
// until one contains a satellite able to serve the requested function, the
// next path breaches the delay bound, paths run out, or the iteration cap
// trips.  Equal-delay paths are ordered by lexicographic node sequence, so
// iteration counts are reproducible.
//
// Before enumerating, the router can price the cheapest *walk* through any
// function-capable satellite (two Dijkstra runs).  If even that walk misses
// the delay bound no simple path can qualify, so the query is rejected
// without enumeration; the trace records the short-circuit.  Disable it via
// KspConfig to exercise the raw enumeration behaviour.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "vfroute/dijkstra.hpp"
#include "vfroute/graph.hpp"
#include "vfroute/path.hpp"

namespace vfroute {

struct KspConfig {
  std::int32_t k_max = 10'000;           // iteration guard
  bool walk_bound_shortcircuit = true;
};

struct KspTrace {
  std::optional<RejectReason> reject;
  std::int32_t paths_examined = 0;
  bool shortcircuit = false;
};

struct KspResult {
  std::optional<RoutePath> path;
  KspTrace trace;
};

// Simple paths from src to dst in nondecreasing (delay, node sequence)
// order.  An optional base mask restricts the eligible links (used for
// capacity filtering) without copying the snapshot.
class YenEnumerator {
 public:
  struct Candidate {
    DelayNs delay = 0;
    std::vector<std::int32_t> nodes;
    std::vector<std::int32_t> links;
  };

  YenEnumerator(const Snapshot& g, NodeId src, NodeId dst,
                std::vector<std::uint8_t> base_keep = {})
      : g_(&g),
        src_(src),
        dst_(dst),
        base_keep_(std::move(base_keep)),
        node_stamp_(static_cast<std::size_t>(g.node_count()), 0),
        link_stamp_(g.links.size(), 0) {}

  std::optional<Candidate> next() {
    if (first_) {
      first_ = false;
      auto chain = detail::lex_shortest_path(*g_, src_, dst_,
                                             [&](std::int32_t li) { return base_ok(li); });
      if (!chain) return std::nullopt;
      accepted_.push_back(to_candidate(*chain));
      return accepted_.back();
    }
    spur_from(accepted_.back());
    if (pool_.empty()) return std::nullopt;
    accepted_.push_back(*pool_.begin());
    pool_.erase(pool_.begin());
    return accepted_.back();
  }

 private:
  struct CandidateLess {
    bool operator()(const Candidate& a, const Candidate& b) const {
      if (a.delay != b.delay) return a.delay < b.delay;
      return a.nodes < b.nodes;
    }
  };

  Candidate to_candidate(const std::vector<std::int32_t>& chain) const {
    Candidate c;
    c.links = chain;
    c.nodes.push_back(src_.value);
    for (std::int32_t li : chain) {
      const Link& l = g_->links[static_cast<std::size_t>(li)];
      c.delay += l.delay;
      c.nodes.push_back(l.to.value);
    }
    return c;
  }

  void spur_from(const Candidate& prev) {
    for (std::size_t i = 0; i < prev.links.size(); ++i) {
      const NodeId spur(prev.nodes[i]);
      ++stamp_;
      for (std::size_t j = 0; j < i; ++j)
        node_stamp_[static_cast<std::size_t>(prev.nodes[j])] = stamp_;
      for (const Candidate& p : accepted_) {
        if (p.links.size() <= i) continue;
        if (std::equal(p.nodes.begin(), p.nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                       prev.nodes.begin()))
          link_stamp_[static_cast<std::size_t>(p.links[i])] = stamp_;
      }
      const auto keep = [&](std::int32_t li) {
        if (!base_ok(li)) return false;
        if (link_stamp_[static_cast<std::size_t>(li)] == stamp_) return false;
        const Link& l = g_->links[static_cast<std::size_t>(li)];
        return node_stamp_[static_cast<std::size_t>(l.from.value)] != stamp_ &&
               node_stamp_[static_cast<std::size_t>(l.to.value)] != stamp_;
      };
      auto tail = detail::lex_shortest_path(*g_, spur, dst_, keep);
      if (!tail) continue;
      std::vector<std::int32_t> chain(prev.links.begin(),
                                      prev.links.begin() + static_cast<std::ptrdiff_t>(i));
      chain.insert(chain.end(), tail->begin(), tail->end());
      pool_.insert(to_candidate(chain));
    }
  }

  bool base_ok(std::int32_t li) const {
    return base_keep_.empty() || base_keep_[static_cast<std::size_t>(li)];
  }

  const Snapshot* g_;
  NodeId src_, dst_;
  std::vector<std::uint8_t> base_keep_;
  bool first_ = true;
  std::vector<Candidate> accepted_;
  std::set<Candidate, CandidateLess> pool_;
  std::vector<std::int32_t> node_stamp_;
  std::vector<std::int32_t> link_stamp_;
  std::int32_t stamp_ = 0;
};

inline KspResult route_ksp(const Snapshot& g, const ApplicationRequest& r, const KspConfig& cfg = {},
                           const SnapshotOverrides& ov = {}) {
  validate_request(g, r);
  if (cfg.k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  KspResult res;

  // Capacity filtering as a link mask; the snapshot itself is never copied.
  std::vector<std::uint8_t> cap_ok(g.links.size(), 0);
  std::vector<std::uint8_t> functional(static_cast<std::size_t>(g.node_count()), 0);
  bool any_functional = false;
  for (std::size_t li = 0; li < g.links.size(); ++li) {
    if (ov.capacity(g, static_cast<std::int32_t>(li)) < r.capacity) continue;
    cap_ok[li] = 1;
    const Link& l = g.links[li];
    for (NodeId end : {l.from, l.to}) {
      if (g.is_satellite(end) && ov.budget(g, end, r.function) >= 1) {
        functional[static_cast<std::size_t>(end.value)] = 1;
        any_functional = true;
      }
    }
  }

  if (cfg.walk_bound_shortcircuit) {
    if (!any_functional) {
      res.trace.shortcircuit = true;
      res.trace.reject = RejectReason::NoFunctionalSatellite;
      return res;
    }
    const auto keep = [&](std::int32_t li) {
      const Link& l = g.links[static_cast<std::size_t>(li)];
      return cap_ok[static_cast<std::size_t>(li)] && l.to != r.source && l.from != r.dest;
    };
    const DistanceTree fwd = detail::dijkstra_masked(g, r.source, Direction::Forward, keep);
    const DistanceTree rev = detail::dijkstra_masked(g, r.dest, Direction::Reverse, keep);
    DelayNs bound = kUnreachable;
    for (std::int32_t v = 0; v < g.node_count(); ++v) {
      if (!functional[static_cast<std::size_t>(v)]) continue;
      const DelayNs a = fwd.dist[static_cast<std::size_t>(v)];
      const DelayNs b = rev.dist[static_cast<std::size_t>(v)];
      if (a != kUnreachable && b != kUnreachable) bound = std::min(bound, a + b);
    }
    if (bound == kUnreachable) {
      res.trace.shortcircuit = true;
      res.trace.reject = RejectReason::NoPath;
      return res;
    }
    if (bound > r.delay_bound) {
      // Even the cheapest walk through a capable satellite misses the bound,
      // so every simple path does too.
      res.trace.shortcircuit = true;
      res.trace.reject = RejectReason::DelayBoundExceeded;
      return res;
    }
  }

  YenEnumerator yen(g, r.source, r.dest, cap_ok);
  for (std::int32_t k = 1; k <= cfg.k_max; ++k) {
    const auto cand = yen.next();
    if (!cand) {
      res.trace.reject = res.trace.paths_examined == 0 ? RejectReason::NoPath
                                                       : RejectReason::SearchExhausted;
      return res;
    }
    res.trace.paths_examined = k;
    if (cand->delay > r.delay_bound) {
      res.trace.reject = RejectReason::DelayBoundExceeded;
      return res;
    }
    NodeId fn(-1);
    for (std::size_t i = 1; i < cand->nodes.size(); ++i) {
      const NodeId n(cand->nodes[i]);
      if (functional[static_cast<std::size_t>(n.value)]) {
        fn = n;
        break;
      }
    }
    if (fn.value >= 0) {
      std::vector<Link> links;
      links.reserve(cand->links.size());
      for (std::int32_t li : cand->links) links.push_back(g.links[static_cast<std::size_t>(li)]);
      res.path = make_route_path(links, fn);
      return res;
    }
  }
  res.trace.reject = RejectReason::IterationCapReached;
  return res;
}

}  // namespace vfroute
