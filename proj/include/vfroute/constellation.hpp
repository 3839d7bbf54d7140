#pragma once

// Synthetic scenario generation: circular-orbit Walker constellation, ground
// site visibility, grid inter-satellite links and randomized link attributes
// / function placement.  Stands in for externally produced ephemerides; the
// orbit model is two-body over a spherical Earth, which is plenty to obtain
// plausible time-varying connectivity.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfroute/graph.hpp"
#include "vfroute/rng.hpp"

namespace vfroute {

struct WalkerSpec {
  std::int32_t n_sats = 0;
  std::int32_t n_planes = 1;
  double inclination_deg = 53.0;
  double altitude_km = 550.0;
  std::int32_t phasing_factor = 1;
  enum class IslPattern : std::uint8_t { Grid4 } isl_pattern = IslPattern::Grid4;
};

struct GroundSite {
  std::string name;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double min_elevation_deg = 25.0;
};

// The four default terminal locations used by the bundled scenarios.
inline std::vector<GroundSite> default_ground_sites(double min_elevation_deg = 25.0) {
  return {
      {"XiAn", 34.27, 108.93, min_elevation_deg},
      {"Beijing", 40.0, 116.0, min_elevation_deg},
      {"Sanya", 18.0, 109.5, min_elevation_deg},
      {"Kashi", 39.5, 76.0, min_elevation_deg},
  };
}

struct LinkAttributes {
  DelayNs delay;
  CapacityKbps capacity;
};

// Per-contact attribute draw: delay uniform in [5,15] ms, capacity uniform in
// [300,350] Mbps, constant for the lifetime of the contact record.
inline LinkAttributes sample_link_attributes(Rng& rng) {
  return {rng.uniform_int(5 * kNsPerMs, 15 * kNsPerMs),
          rng.uniform_int(300 * kKbpsPerMbps, 350 * kKbpsPerMbps)};
}

namespace detail {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kMuKm3S2 = 398600.4418;        // Earth gravitational parameter
inline constexpr double kEarthRotRadS = 7.2921159e-5;  // sidereal rotation rate

struct Vec3 {
  double x, y, z;
};

inline Vec3 sat_position_eci(const WalkerSpec& w, std::int32_t plane, std::int32_t slot,
                             double t_seconds) {
  const std::int32_t per_plane = w.n_sats / w.n_planes;
  const double a = kEarthRadiusKm + w.altitude_km;
  const double mean_motion = std::sqrt(kMuKm3S2 / (a * a * a));
  const double raan = 2.0 * kPi * plane / w.n_planes;
  const double u0 = 2.0 * kPi * slot / per_plane +
                    2.0 * kPi * w.phasing_factor * plane / w.n_sats;
  const double u = u0 + mean_motion * t_seconds;
  const double incl = w.inclination_deg * kPi / 180.0;
  // In-plane circular position rotated by inclination then RAAN.
  const double xo = a * std::cos(u), yo = a * std::sin(u);
  const double x1 = xo, y1 = yo * std::cos(incl), z1 = yo * std::sin(incl);
  return {x1 * std::cos(raan) - y1 * std::sin(raan),
          x1 * std::sin(raan) + y1 * std::cos(raan), z1};
}

inline Vec3 site_position_eci(const GroundSite& s, double t_seconds) {
  const double lat = s.lat_deg * kPi / 180.0;
  const double lon = s.lon_deg * kPi / 180.0 + kEarthRotRadS * t_seconds;
  return {kEarthRadiusKm * std::cos(lat) * std::cos(lon),
          kEarthRadiusKm * std::cos(lat) * std::sin(lon), kEarthRadiusKm * std::sin(lat)};
}

inline bool visible(const Vec3& site, const Vec3& sat, double min_elevation_deg) {
  const Vec3 rel{sat.x - site.x, sat.y - site.y, sat.z - site.z};
  const double site_norm = std::sqrt(site.x * site.x + site.y * site.y + site.z * site.z);
  const double rel_norm = std::sqrt(rel.x * rel.x + rel.y * rel.y + rel.z * rel.z);
  if (rel_norm == 0.0) return true;
  const double sin_el = (site.x * rel.x + site.y * rel.y + site.z * rel.z) / (site_norm * rel_norm);
  return sin_el >= std::sin(min_elevation_deg * kPi / 180.0);
}

}  // namespace detail

// Propagates the constellation over the horizon sampled every `step` and
// emits directed contact records: grid ISLs span the whole horizon, ground
// links cover the coalesced visibility intervals.  Node ids follow the
// convention "sites first, then satellites plane-major", matching
// make_scenario_node_table below.
inline ContactPlan compute_contacts(const WalkerSpec& w, const std::vector<GroundSite>& sites,
                                    TimeWindow horizon, TimeUs step, Rng& rng) {
  if (w.n_sats <= 0 || w.n_planes <= 0 || w.n_sats % w.n_planes != 0)
    throw std::invalid_argument("satellite count must be a positive multiple of the plane count");
  if (w.altitude_km <= 0) throw std::invalid_argument("altitude must be positive");
  if (horizon.start >= horizon.end) throw std::invalid_argument("empty time horizon");
  if (step <= 0) throw std::invalid_argument("sampling step must be positive");
  for (const GroundSite& s : sites) {
    if (s.lat_deg < -90.0 || s.lat_deg > 90.0 || s.lon_deg < -180.0 || s.lon_deg > 180.0 ||
        s.min_elevation_deg < 0.0 || s.min_elevation_deg >= 90.0)
      throw std::invalid_argument("ground site " + s.name + " out of range");
  }

  const std::int32_t per_plane = w.n_sats / w.n_planes;
  const auto gt_count = static_cast<std::int32_t>(sites.size());
  const auto sat_node = [&](std::int32_t plane, std::int32_t slot) {
    return NodeId(gt_count + plane * per_plane + slot);
  };

  ContactPlan plan;
  auto emit_pair = [&](NodeId a, NodeId b, TimeUs start, TimeUs end) {
    const LinkAttributes attr = sample_link_attributes(rng);
    plan.records.push_back({a, b, start, end, attr.delay, attr.capacity});
    plan.records.push_back({b, a, start, end, attr.delay, attr.capacity});
  };

  // Always-on grid ISLs: ring neighbour in the plane, same slot in the next
  // plane.  Two-element rings collapse to a single pair.
  for (std::int32_t p = 0; p < w.n_planes; ++p) {
    if (per_plane >= 2) {
      const std::int32_t ring = per_plane == 2 ? 1 : per_plane;
      for (std::int32_t s = 0; s < ring; ++s)
        emit_pair(sat_node(p, s), sat_node(p, (s + 1) % per_plane), horizon.start, horizon.end);
    }
  }
  if (w.n_planes >= 2) {
    const std::int32_t ring = w.n_planes == 2 ? 1 : w.n_planes;
    for (std::int32_t p = 0; p < ring; ++p)
      for (std::int32_t s = 0; s < per_plane; ++s)
        emit_pair(sat_node(p, s), sat_node((p + 1) % w.n_planes, s), horizon.start, horizon.end);
  }

  // Ground-satellite visibility, sampled and coalesced into intervals.
  const std::int64_t n_samples = (horizon.length() + step - 1) / step + 1;
  for (std::int32_t si = 0; si < gt_count; ++si) {
    for (std::int32_t p = 0; p < w.n_planes; ++p) {
      for (std::int32_t s = 0; s < per_plane; ++s) {
        std::int64_t run_start = -1;
        for (std::int64_t k = 0; k < n_samples; ++k) {
          const TimeUs t = std::min(horizon.start + k * step, horizon.end);
          const double ts = static_cast<double>(t) / static_cast<double>(kUsPerS);
          const bool vis = detail::visible(detail::site_position_eci(sites[static_cast<std::size_t>(si)], ts),
                                           detail::sat_position_eci(w, p, s, ts),
                                           sites[static_cast<std::size_t>(si)].min_elevation_deg);
          if (vis && run_start < 0) run_start = t;
          if ((!vis || t == horizon.end) && run_start >= 0) {
            const TimeUs end = vis ? horizon.end : std::min(t, horizon.end);
            if (end > run_start) emit_pair(NodeId(si), sat_node(p, s), run_start, end);
            run_start = -1;
          }
          if (t == horizon.end) break;
        }
      }
    }
  }
  return plan;
}

// For each function independently, a uniformly random ceil(fraction * n)
// subset of the satellites receives `call_cap` allowed calls; everyone else
// zero.  Reusing a seed yields nested subsets across growing fractions.
inline std::vector<std::vector<std::int32_t>> assign_functions(const std::vector<NodeId>& sats,
                                                               std::int32_t node_count,
                                                               std::int32_t n_functions,
                                                               double fraction,
                                                               std::int32_t call_cap, Rng& rng) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw std::invalid_argument("function fraction must be in (0, 1]");
  if (n_functions < 1) throw std::invalid_argument("need at least one function");
  const auto enabled = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(sats.size()) - 1e-9));
  std::vector<std::vector<std::int32_t>> budgets(
      static_cast<std::size_t>(node_count), std::vector<std::int32_t>(static_cast<std::size_t>(n_functions), 0));
  for (std::int32_t f = 0; f < n_functions; ++f) {
    std::vector<NodeId> order = sats;
    rng.shuffle(order);
    for (std::size_t i = 0; i < enabled && i < order.size(); ++i)
      budgets[static_cast<std::size_t>(order[i].value)][static_cast<std::size_t>(f)] = call_cap;
  }
  return budgets;
}

// Everything needed to regenerate a scenario from its config.
struct ScenarioSpec {
  WalkerSpec walker;
  std::vector<GroundSite> sites = default_ground_sites();
  TimeUs horizon_us = 1800 * kUsPerS;
  TimeUs step_us = 10 * kUsPerS;
  std::int32_t n_functions = 3;
  double function_fraction = 0.10;
  std::int32_t call_cap = 1;
  std::uint64_t seed = 1;
};

struct Scenario {
  NodeTable nodes;
  ContactPlan plan;
  TimeWindow horizon;
};

inline NodeTable make_scenario_node_table(const ScenarioSpec& spec) {
  NodeTable t;
  for (const GroundSite& s : spec.sites) {
    t.names.push_back(s.name);
    t.kinds.push_back(NodeKind::GroundTerminal);
  }
  for (std::int32_t i = 0; i < spec.walker.n_sats; ++i) {
    t.names.push_back("S" + std::to_string(i));
    t.kinds.push_back(NodeKind::Satellite);
  }
  for (std::int32_t f = 1; f <= spec.n_functions; ++f) t.functions.push_back("f" + std::to_string(f));
  t.budgets.assign(t.size(), std::vector<std::int32_t>(static_cast<std::size_t>(spec.n_functions), 0));
  return t;
}

inline Scenario generate_scenario(const ScenarioSpec& spec) {
  Scenario sc;
  sc.horizon = {0, spec.horizon_us};
  sc.nodes = make_scenario_node_table(spec);
  Rng root(spec.seed);
  Rng contacts_rng = root.derive("contacts");
  sc.plan = compute_contacts(spec.walker, spec.sites, sc.horizon, spec.step_us, contacts_rng);
  Rng fn_rng = root.derive("functions");
  sc.nodes.budgets = assign_functions(sc.nodes.satellites(),
                                      static_cast<std::int32_t>(sc.nodes.size()),
                                      spec.n_functions, spec.function_fraction, spec.call_cap,
                                      fn_rng);
  return sc;
}

// Largest divisor of n not above sqrt(n); keeps generated grids roughly
// square when a sweep only specifies the satellite count.
inline std::int32_t default_plane_count(std::int32_t n_sats) {
  std::int32_t best = 1;
  for (std::int32_t p = 1; static_cast<std::int64_t>(p) * p <= n_sats; ++p)
    if (n_sats % p == 0) best = p;
  return best;
}

}  // namespace vfroute
