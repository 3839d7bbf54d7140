#pragma once

// Integer linear program for one (snapshot, request) pair.
//
// Binary x per directed link selects the route; integer y per link carries
// the hop order and eliminates sub-tours.  Constraint rows are tagged 1..15:
//
//   1/2   source: one link out, none in          9   total delay within bound
//   3/4   destination: one link in, none out    10   function coverage
//   5/6   relay in/out degree at most 2         11   x-y binding (two rows/link)
//   7     relay flow conservation               12   y bounded by total hop count
//   8     per-link capacity big-M               13   source y sum equals 1
//                                               14   dest incoming y equals hops
//                                               15   relay hop-order increment
//
// Rows are held in a checkable form (exact integer evaluation); export_lp
// writes the industry LP text format with deterministic ordering.  The text
// form introduces one continuous helper h = sum(x) so the per-link rows of
// family 12 stay constant-size and the file scales linearly with the model.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfroute/graph.hpp"
#include "vfroute/path.hpp"

namespace vfroute {

inline constexpr std::int64_t kOrderBigM = 1'000'000;  // binding constant for y <= M x

struct IlpConstraint {
  std::int32_t tag = 0;          // equation family 1..15
  std::string name;              // c<tag>_<index>
  std::vector<std::pair<std::int32_t, std::int64_t>> x_terms;  // (link idx, coeff)
  std::vector<std::pair<std::int32_t, std::int64_t>> y_terms;
  std::int64_t total_x_coeff = 0;  // coefficient applied to sum of all x
  enum class Sense : std::uint8_t { Le, Ge, Eq } sense = Sense::Eq;
  std::int64_t rhs = 0;
  int print_scale = 0;  // decimal digits when rendering coefficients/rhs
  std::string subject;  // witness description ("node 4", "link 2->7")
};

struct VariableAssignment {
  std::vector<std::uint8_t> x;   // aligned with Snapshot::links order
  std::vector<std::int64_t> y;
};

struct IlpModel {
  std::vector<Link> links;  // snapshot link order (sorted by from,to)
  std::int32_t node_count = 0;
  ApplicationRequest request;
  CapacityKbps big_m_capacity = 0;          // max link capacity in the snapshot
  std::int64_t big_m_order = kOrderBigM;
  std::vector<DelayNs> objective;           // delay coefficient per x variable
  std::vector<IlpConstraint> constraints;

  std::int32_t x_count() const { return static_cast<std::int32_t>(links.size()); }
  std::int32_t y_count() const { return static_cast<std::int32_t>(links.size()); }

  // Row count over families 1..10: 4 + 3(|V|-2) + |L| + 2 = 3|V| + |L|.
  std::int64_t core_constraint_count() const {
    std::int64_t n = 0;
    for (const auto& c : constraints)
      if (c.tag <= 10) ++n;
    return n;
  }
  std::int64_t total_constraint_count() const {
    return static_cast<std::int64_t>(constraints.size());
  }
};

namespace detail {

inline std::string link_desc(const Link& l) {
  return "link " + std::to_string(l.from.value) + "->" + std::to_string(l.to.value);
}

}  // namespace detail

inline IlpModel build_model(const Snapshot& g, const ApplicationRequest& r) {
  validate_request(g, r);
  IlpModel m;
  m.links = g.links;
  m.node_count = g.node_count();
  m.request = r;
  for (const Link& l : g.links) m.big_m_capacity = std::max(m.big_m_capacity, l.capacity);
  m.objective.reserve(g.links.size());
  for (const Link& l : g.links) m.objective.push_back(l.delay);

  const auto L = static_cast<std::int32_t>(g.links.size());
  auto out_of = [&](NodeId v, auto&& fn) {
    for (std::int32_t li = g.out_offsets[static_cast<std::size_t>(v.value)];
         li < g.out_offsets[static_cast<std::size_t>(v.value) + 1]; ++li)
      fn(li);
  };
  auto in_of = [&](NodeId v, auto&& fn) {
    for (std::int32_t ii = g.in_offsets[static_cast<std::size_t>(v.value)];
         ii < g.in_offsets[static_cast<std::size_t>(v.value) + 1]; ++ii)
      fn(g.in_links[static_cast<std::size_t>(ii)]);
  };
  using Sense = IlpConstraint::Sense;
  // 4|V| + 4|L| rows in total; reserving keeps the row references below stable.
  m.constraints.reserve(static_cast<std::size_t>(4 * m.node_count) + 4 * g.links.size() + 8);
  auto row = [&](std::int32_t tag, std::string idx, Sense sense, std::int64_t rhs,
                 std::string subject, int scale = 0) -> IlpConstraint& {
    IlpConstraint c;
    c.tag = tag;
    c.name = "c" + std::to_string(tag) + "_" + std::move(idx);
    c.sense = sense;
    c.rhs = rhs;
    c.subject = std::move(subject);
    c.print_scale = scale;
    m.constraints.push_back(std::move(c));
    return m.constraints.back();
  };
  const std::string src_subject = "node " + std::to_string(r.source.value);
  const std::string dst_subject = "node " + std::to_string(r.dest.value);

  {  // 1/2: unit out-degree at the source, nothing back in
    IlpConstraint& c1 = row(1, "0", Sense::Eq, 1, src_subject);
    out_of(r.source, [&](std::int32_t li) { c1.x_terms.emplace_back(li, 1); });
    IlpConstraint& c2 = row(2, "0", Sense::Eq, 0, src_subject);
    in_of(r.source, [&](std::int32_t li) { c2.x_terms.emplace_back(li, 1); });
  }
  {  // 3/4: unit in-degree at the destination, nothing back out
    IlpConstraint& c3 = row(3, "0", Sense::Eq, 1, dst_subject);
    in_of(r.dest, [&](std::int32_t li) { c3.x_terms.emplace_back(li, 1); });
    IlpConstraint& c4 = row(4, "0", Sense::Eq, 0, dst_subject);
    out_of(r.dest, [&](std::int32_t li) { c4.x_terms.emplace_back(li, 1); });
  }
  for (std::int32_t v = 0; v < m.node_count; ++v) {  // 5/6/7 per relay
    const NodeId node(v);
    if (node == r.source || node == r.dest) continue;
    const std::string subject = "node " + std::to_string(v);
    IlpConstraint& c5 = row(5, std::to_string(v), Sense::Le, 2, subject);
    in_of(node, [&](std::int32_t li) { c5.x_terms.emplace_back(li, 1); });
    IlpConstraint& c6 = row(6, std::to_string(v), Sense::Le, 2, subject);
    out_of(node, [&](std::int32_t li) { c6.x_terms.emplace_back(li, 1); });
    IlpConstraint& c7 = row(7, std::to_string(v), Sense::Eq, 0, subject);
    in_of(node, [&](std::int32_t li) { c7.x_terms.emplace_back(li, 1); });
    out_of(node, [&](std::int32_t li) { c7.x_terms.emplace_back(li, -1); });
  }
  for (std::int32_t li = 0; li < L; ++li) {  // 8: (C_l - M) x_l >= C_a - M
    const Link& l = m.links[static_cast<std::size_t>(li)];
    IlpConstraint& c8 = row(8, std::to_string(li), Sense::Ge, r.capacity - m.big_m_capacity,
                            detail::link_desc(l), 3);
    c8.x_terms.emplace_back(li, l.capacity - m.big_m_capacity);
  }
  {  // 9: delay budget
    IlpConstraint& c9 = row(9, "0", Sense::Le, r.delay_bound, "", 6);
    for (std::int32_t li = 0; li < L; ++li)
      c9.x_terms.emplace_back(li, m.links[static_cast<std::size_t>(li)].delay);
  }
  {  // 10: some selected link must enter a function-capable satellite
    IlpConstraint& c10 = row(10, "0", Sense::Ge, 1, "");
    for (std::int32_t li = 0; li < L; ++li) {
      const NodeId head = m.links[static_cast<std::size_t>(li)].to;
      if (!g.is_satellite(head)) continue;
      const std::int64_t w = g.budget(head, r.function);
      if (w >= 1) c10.x_terms.emplace_back(li, w);
    }
  }
  for (std::int32_t li = 0; li < L; ++li) {  // 11: x <= y <= M x
    const std::string subject = detail::link_desc(m.links[static_cast<std::size_t>(li)]);
    IlpConstraint& lo = row(11, std::to_string(2 * li), Sense::Le, 0, subject);
    lo.x_terms.emplace_back(li, 1);
    lo.y_terms.emplace_back(li, -1);
    IlpConstraint& hi = row(11, std::to_string(2 * li + 1), Sense::Le, 0, subject);
    hi.y_terms.emplace_back(li, 1);
    hi.x_terms.emplace_back(li, -m.big_m_order);
  }
  for (std::int32_t li = 0; li < L; ++li) {  // 12: y bounded by total selected links
    IlpConstraint& c12 =
        row(12, std::to_string(li), Sense::Le, 0, detail::link_desc(m.links[static_cast<std::size_t>(li)]));
    c12.y_terms.emplace_back(li, 1);
    c12.total_x_coeff = -1;
  }
  {  // 13: the source's outgoing link is hop 1
    IlpConstraint& c13 = row(13, "0", Sense::Eq, 1, src_subject);
    out_of(r.source, [&](std::int32_t li) { c13.y_terms.emplace_back(li, 1); });
  }
  {  // 14: the destination's incoming link carries the final hop number
    IlpConstraint& c14 = row(14, "0", Sense::Eq, 0, dst_subject);
    in_of(r.dest, [&](std::int32_t li) { c14.y_terms.emplace_back(li, 1); });
    c14.total_x_coeff = -1;
  }
  for (std::int32_t v = 0; v < m.node_count; ++v) {  // 15: hop order advances through relays
    const NodeId node(v);
    if (node == r.source || node == r.dest) continue;
    IlpConstraint& c15 = row(15, std::to_string(v), Sense::Eq, 0, "node " + std::to_string(v));
    in_of(node, [&](std::int32_t li) {
      c15.y_terms.emplace_back(li, 1);
      c15.x_terms.emplace_back(li, 1);
    });
    out_of(node, [&](std::int32_t li) { c15.y_terms.emplace_back(li, -1); });
  }
  return m;
}

// x = 1 on every path link, y = 1-based hop index; everything else zero.
// The path must consist of links present in the snapshot, each used once.
inline VariableAssignment encode_path(const RoutePath& p, const Snapshot& g) {
  VariableAssignment a;
  a.x.assign(g.links.size(), 0);
  a.y.assign(g.links.size(), 0);
  std::int64_t hop = 0;
  for (const Link& l : p.links) {
    const std::int32_t idx = g.find_link(l.from, l.to);
    if (idx < 0) throw std::invalid_argument("encode_path: link absent from snapshot");
    const Link& gl = g.links[static_cast<std::size_t>(idx)];
    if (gl.delay != l.delay || gl.capacity != l.capacity)
      throw std::invalid_argument("encode_path: link attributes differ from snapshot");
    if (a.x[static_cast<std::size_t>(idx)])
      throw std::invalid_argument("encode_path: path repeats a directed link");
    a.x[static_cast<std::size_t>(idx)] = 1;
    a.y[static_cast<std::size_t>(idx)] = ++hop;
  }
  return a;
}

struct TagStatus {
  std::int32_t tag = 0;
  bool satisfied = true;
  std::string witness;  // first violated row, empty when satisfied
};

struct ConstraintReport {
  std::array<TagStatus, 15> tags;
  std::int64_t objective = 0;  // delay of the assignment, exact

  bool all_satisfied() const {
    for (const auto& t : tags)
      if (!t.satisfied) return false;
    return true;
  }
  bool satisfied(std::int32_t tag) const { return tags[static_cast<std::size_t>(tag - 1)].satisfied; }
};

inline ConstraintReport check_assignment(const IlpModel& m, const VariableAssignment& a) {
  if (a.x.size() != m.links.size() || a.y.size() != m.links.size())
    throw std::invalid_argument("assignment does not cover every model variable");

  ConstraintReport report;
  for (std::size_t i = 0; i < 15; ++i) report.tags[i].tag = static_cast<std::int32_t>(i + 1);

  std::int64_t total_x = 0;
  for (std::uint8_t xv : a.x) total_x += xv;
  for (std::size_t li = 0; li < m.links.size(); ++li)
    report.objective += a.x[li] ? m.objective[li] : 0;

  for (const IlpConstraint& c : m.constraints) {
    std::int64_t lhs = c.total_x_coeff * total_x;
    for (const auto& [li, coeff] : c.x_terms) lhs += coeff * a.x[static_cast<std::size_t>(li)];
    for (const auto& [li, coeff] : c.y_terms) lhs += coeff * a.y[static_cast<std::size_t>(li)];
    bool ok = true;
    switch (c.sense) {
      case IlpConstraint::Sense::Le: ok = lhs <= c.rhs; break;
      case IlpConstraint::Sense::Ge: ok = lhs >= c.rhs; break;
      case IlpConstraint::Sense::Eq: ok = lhs == c.rhs; break;
    }
    if (!ok) {
      TagStatus& t = report.tags[static_cast<std::size_t>(c.tag - 1)];
      if (t.satisfied) {
        t.satisfied = false;
        t.witness = c.subject.empty() ? c.name : c.name + " (" + c.subject + ")";
      }
    }
  }
  return report;
}

namespace detail {

inline std::string lp_coeff(std::int64_t value, int scale) { return format_scaled(value, scale); }

inline void lp_terms(std::string& out, const IlpModel& m, const IlpConstraint& c) {
  int emitted = 0;
  auto push = [&](std::int64_t coeff, const std::string& var) {
    if (emitted > 0) out += coeff < 0 ? " - " : " + ";
    else if (coeff < 0) out += "-";
    const std::int64_t mag = coeff < 0 ? -coeff : coeff;
    out += lp_coeff(mag, c.print_scale);
    out += ' ';
    out += var;
    if (++emitted % 8 == 0) out += "\n   ";
  };
  for (const auto& [li, coeff] : c.x_terms)
    push(coeff, "x_" + std::to_string(m.links[static_cast<std::size_t>(li)].from.value) + "_" +
                    std::to_string(m.links[static_cast<std::size_t>(li)].to.value));
  for (const auto& [li, coeff] : c.y_terms)
    push(coeff, "y_" + std::to_string(m.links[static_cast<std::size_t>(li)].from.value) + "_" +
                    std::to_string(m.links[static_cast<std::size_t>(li)].to.value));
  if (c.total_x_coeff != 0) push(c.total_x_coeff, "h");
  if (emitted == 0) {
    // Degenerate empty row (isolated node); anchor it on the first variable.
    if (!m.links.empty())
      out += "0 x_" + std::to_string(m.links.front().from.value) + "_" +
             std::to_string(m.links.front().to.value);
    else
      out += "0 h";
  }
}

}  // namespace detail

// Industry LP text format: objective, named rows, bounds, Binaries (x) and
// Generals (y).  Variable order follows the snapshot's (from,to)-sorted
// links, so re-export of the same model is byte-identical.
inline std::string export_lp(const IlpModel& m, const NodeTable* names = nullptr) {
  std::string out;
  out += "\\ minimum-delay function-constrained route model\n";
  out += "\\ source=" + std::to_string(m.request.source.value) +
         " dest=" + std::to_string(m.request.dest.value) +
         " function=" + std::to_string(m.request.function) +
         " capacity_mbps=" + format_mbps(m.request.capacity) +
         " delay_bound_ms=" + format_ms(m.request.delay_bound) + "\n";
  if (names) {
    for (std::size_t i = 0; i < names->size(); ++i)
      out += "\\ node " + std::to_string(i) + " = " + names->names[i] +
             (names->kinds[i] == NodeKind::Satellite ? " (satellite)\n" : " (ground terminal)\n");
  }
  auto var = [&](const char* prefix, const Link& l) {
    return std::string(prefix) + "_" + std::to_string(l.from.value) + "_" + std::to_string(l.to.value);
  };

  out += "Minimize\n obj:";
  if (m.links.empty()) {
    out += " 0 h";
  } else {
    int emitted = 0;
    for (std::size_t li = 0; li < m.links.size(); ++li) {
      out += emitted == 0 ? " " : " + ";
      out += detail::lp_coeff(m.objective[li], 6) + " " + var("x", m.links[li]);
      if (++emitted % 8 == 0 && li + 1 < m.links.size()) out += "\n  ";
    }
  }
  out += "\nSubject To\n";
  for (const IlpConstraint& c : m.constraints) {
    out += " " + c.name + ": ";
    detail::lp_terms(out, m, c);
    switch (c.sense) {
      case IlpConstraint::Sense::Le: out += " <= "; break;
      case IlpConstraint::Sense::Ge: out += " >= "; break;
      case IlpConstraint::Sense::Eq: out += " = "; break;
    }
    const bool neg = c.rhs < 0;
    out += (neg ? "-" : "") + detail::lp_coeff(neg ? -c.rhs : c.rhs, c.print_scale) + "\n";
  }
  {  // helper h = total selected links, keeps family-12 rows constant-size
    out += " ch_0: ";
    if (m.links.empty()) {
      out += "1 h";
    } else {
      out += "1 h";
      int emitted = 0;
      for (const Link& l : m.links) {
        out += " - 1 " + var("x", l);
        if (++emitted % 8 == 0) out += "\n   ";
      }
    }
    out += " = 0\n";
  }
  out += "Bounds\n";
  for (const Link& l : m.links)
    out += " 0 <= " + var("y", l) + " <= " + std::to_string(m.big_m_order) + "\n";
  out += "Binaries\n";
  for (std::size_t i = 0; i < m.links.size(); ++i) {
    out += i % 8 == 0 ? (i == 0 ? " " : "\n ") : " ";
    out += var("x", m.links[i]);
  }
  if (!m.links.empty()) out += "\n";
  out += "Generals\n";
  for (std::size_t i = 0; i < m.links.size(); ++i) {
    out += i % 8 == 0 ? (i == 0 ? " " : "\n ") : " ";
    out += var("y", m.links[i]);
  }
  if (!m.links.empty()) out += "\n";
  out += "End\n";
  return out;
}

}  // namespace vfroute
