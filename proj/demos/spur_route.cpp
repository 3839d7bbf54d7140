// Walks through the situation that motivates the function-aware router: the
// only satellite able to serve the function sits on a spur off the direct
// route, so the best path doubles back through a relay.  The k-shortest-path
// router, restricted to simple paths, rejects the same request.

#include <iostream>

#include "vfroute/ilp.hpp"
#include "vfroute/ksp.hpp"
#include "vfroute/oracle.hpp"
#include "vfroute/vfsp.hpp"

using namespace vfroute;

int main() {
  // Nodes: 0=src GT, 1=dst GT, 2..4 satellites; only node 3 hosts the
  // function.  Every edge is bidirectional.
  std::vector<NodeKind> kinds{NodeKind::GroundTerminal, NodeKind::GroundTerminal,
                              NodeKind::Satellite, NodeKind::Satellite, NodeKind::Satellite};
  std::vector<std::vector<std::int32_t>> budgets{{}, {}, {0}, {1}, {0}};
  budgets[0] = {0};
  budgets[1] = {0};
  std::vector<Link> links;
  auto both = [&](int a, int b, DelayNs d) {
    links.push_back({NodeId(a), NodeId(b), d, 300 * kKbpsPerMbps});
    links.push_back({NodeId(b), NodeId(a), d, 300 * kKbpsPerMbps});
  };
  both(0, 2, 5 * kNsPerMs);
  both(2, 1, 5 * kNsPerMs);
  both(2, 3, 7 * kNsPerMs);
  both(2, 4, 9 * kNsPerMs);
  const Snapshot g = Snapshot::make({0, kUsPerS}, kinds, budgets, links);

  ApplicationRequest req;
  req.source = NodeId(0);
  req.dest = NodeId(1);
  req.function = 0;
  req.capacity = 50 * kKbpsPerMbps;
  req.delay_bound = 30 * kNsPerMs;

  const VfspResult vfsp = route_vfsp(g, req);
  std::cout << "vfsp: ";
  if (vfsp.path) {
    for (NodeId n : vfsp.path->node_sequence()) std::cout << n.value << " ";
    std::cout << "(delay " << format_ms(vfsp.path->total_delay) << " ms)\n";
  } else {
    std::cout << "infeasible\n";
  }

  const KspResult ksp = route_ksp(g, req);
  std::cout << "ksp:  " << (ksp.path ? "routed" : "infeasible")
            << " after " << ksp.trace.paths_examined << " paths\n";

  const auto oracle = brute_force_optimal(g, req);
  std::cout << "oracle delay: " << (oracle ? format_ms(oracle->total_delay) : "infeasible") << " ms\n";

  const IlpModel model = build_model(g, req);
  std::cout << "model rows: " << model.total_constraint_count() << " ("
            << model.core_constraint_count() << " core)\n";
  return 0;
}
