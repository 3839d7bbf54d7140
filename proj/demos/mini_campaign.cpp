// Generates a pocket-sized constellation scenario and sweeps the fraction of
// function-enabled satellites, printing the metrics CSV to stdout.

#include <iostream>

#include "vfroute/io.hpp"

using namespace vfroute;

int main() {
  ScenarioSpec spec;
  spec.walker = {60, 6, 53.0, 550.0, 1, WalkerSpec::IslPattern::Grid4};
  spec.horizon_us = 600 * kUsPerS;
  spec.n_functions = 2;
  spec.seed = 7;

  const Scenario sc = generate_scenario(spec);
  const std::vector<Snapshot> snaps = build_snapshots(sc.plan, sc.horizon, sc.nodes);
  std::cerr << "windows: " << snaps.size() << ", links in first window: "
            << snaps.front().link_count() << "\n";

  SimulationConfig cfg;
  cfg.n_requests = 300;
  cfg.n_functions = spec.n_functions;
  cfg.call_cap = 2;
  cfg.seed = 7;
  cfg.measure_time = false;

  SweepContext ctx;
  ctx.snapshots = &snaps;
  const std::vector<double> fractions{0.1, 0.2, 0.4, 0.8};
  const std::vector<Algorithm> algos{Algorithm::Ksp, Algorithm::Vfsp};
  const auto rows = sweep(SweepParam::FunctionFraction, fractions, cfg, ctx, algos);
  std::cout << metrics_csv(rows);
  return 0;
}
