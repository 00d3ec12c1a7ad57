#pragma once

// Greedy structure assignment: score all candidate paths, fuse the best one
// into a hierarchical node, drop its members from the working graph and
// repeat until no FIFO/LIFO path of length >= 2 remains. Whatever is left
// becomes single-cell registers.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "star/structure_id.hpp"

namespace star {

struct Weights {
  double depth = 1.0; // reward for cells saved (members - depth)
  double demux = 0.5; // penalty per distinct port wired to the structure
  double util = 1.0;  // reward for busy buffers

  friend bool operator==(const Weights&, const Weights&) = default;
};

/// Parses the CLI weight syntax "depth=X,demux=Y,util=Z"; omitted keys keep
/// their defaults.
inline Weights parse_weights(std::string_view text) {
  Weights w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error("weights: expected key=value, got '" + std::string(item) + "'");
    std::string_view key = item.substr(0, eq);
    double value = 0;
    try {
      value = std::stod(std::string(item.substr(eq + 1)));
    } catch (const std::exception&) {
      throw Error("weights: bad number in '" + std::string(item) + "'");
    }
    if (value < 0) throw Error("weights: '" + std::string(key) + "' must be nonnegative");
    if (key == "depth")
      w.depth = value;
    else if (key == "demux")
      w.demux = value;
    else if (key == "util")
      w.util = value;
    else
      throw Error("weights: unknown key '" + std::string(key) + "'");
    pos = end + 1;
  }
  return w;
}

/// The hierarchical-node lifetime: the window during which the fused
/// structure is in use. FIFO: first production to last consumption. LIFO:
/// the first (outermost) member's lifetime, which encloses all others.
inline Interval structure_lifetime(const CompatGraph& g, const StructPath& p) {
  const TimedDatum& first = g.nodes[p.nodes.front()];
  if (p.label == StorageKind::Lifo) return lifetime(first);
  return {first.tau_min(), g.nodes[p.nodes.back()].tau_max()};
}

struct CandidateMetrics {
  std::size_t members = 0;
  std::size_t depth = 0;
  std::size_t demux = 0;      // distinct input ports feeding + output ports served
  double utilization = 0.0;   // member residency-cycles / (depth * span)
};

inline CandidateMetrics candidate_metrics(const CompatGraph& g,
                                          const StructPath& p,
                                          std::size_t depth) {
  CandidateMetrics m;
  m.members = p.nodes.size();
  m.depth = depth;
  std::set<std::string_view> in_ports, out_ports;
  Cycle residency = 0;
  for (std::size_t v : p.nodes) {
    const TimedDatum& d = g.nodes[v];
    in_ports.insert(d.write_port);
    for (const auto& r : d.reads) out_ports.insert(r.port);
    residency += lifetime(d).span();
  }
  m.demux = in_ports.size() + out_ports.size();
  Cycle span = structure_lifetime(g, p).span();
  m.utilization = static_cast<double>(residency) /
                  (static_cast<double>(depth) * static_cast<double>(span));
  return m;
}

/// Higher is better. Favors cells saved by sharing, busy buffers and simple
/// interconnect, in user-weighted proportions.
inline double score(const CandidateMetrics& m, const Weights& w) {
  return w.depth * (static_cast<double>(m.members) - static_cast<double>(m.depth)) +
         w.util * m.utilization - w.demux * static_cast<double>(m.demux);
}

/// Fused structure (or a leftover register) in the working graph. Members
/// are datum ids in path order; the lifetime interval is the structure's,
/// not any single member's.
struct HierNode {
  StorageKind kind = StorageKind::Register;
  std::size_t depth = 1;
  std::vector<std::string> members;
  Interval lifetime;

  friend bool operator==(const HierNode&, const HierNode&) = default;
};

struct AssignStep {
  std::size_t iteration = 0;
  HierNode node;
  double node_score = 0.0;
  std::size_t candidate_count = 0;
};

struct AssignResult {
  std::vector<HierNode> structures; // fused FIFO/LIFO nodes, pick order
  std::vector<HierNode> leftovers;  // depth-1 registers, chronological order
  std::vector<AssignStep> trace;

  /// Structures then leftovers: the complete partition of the data.
  std::vector<HierNode> all() const {
    std::vector<HierNode> v = structures;
    v.insert(v.end(), leftovers.begin(), leftovers.end());
    return v;
  }
};

namespace detail {

struct Candidate {
  StructPath path;
  std::size_t depth = 0;
  CandidateMetrics metrics;
  double value = 0.0;
};

// score desc, then more members, then earliest start, then member ids
inline bool candidate_better(const CompatGraph& g, const Candidate& a,
                             const Candidate& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.path.nodes.size() != b.path.nodes.size())
    return a.path.nodes.size() > b.path.nodes.size();
  if (a.path.nodes.front() != b.path.nodes.front())
    return a.path.nodes.front() < b.path.nodes.front();
  auto ids = [&](const Candidate& c) {
    std::vector<std::string_view> v;
    for (std::size_t n : c.path.nodes) v.push_back(g.nodes[n].id);
    return v;
  };
  return ids(a) < ids(b);
}

} // namespace detail

/// Runs the assignment loop. The returned structures plus leftovers
/// partition the data: every datum lands in exactly one node.
inline AssignResult assign(const CompatGraph& g, const Weights& w = {}) {
  AssignResult res;
  std::vector<char> alive(g.size(), 1);

  for (std::size_t iteration = 1;; ++iteration) {
    std::vector<detail::Candidate> candidates;
    for (StorageKind label : {StorageKind::Fifo, StorageKind::Lifo}) {
      for (auto& p : longest_paths(g, label, alive)) {
        detail::Candidate c;
        c.depth = label == StorageKind::Fifo ? fifo_depth(g, p) : lifo_depth(p);
        c.metrics = candidate_metrics(g, p, c.depth);
        c.value = score(c.metrics, w);
        c.path = std::move(p);
        candidates.push_back(std::move(c));
      }
    }
    if (candidates.empty()) break;

    const detail::Candidate* best = &candidates.front();
    for (const auto& c : candidates)
      if (detail::candidate_better(g, c, *best)) best = &c;

    HierNode node;
    node.kind = best->path.label;
    node.depth = best->depth;
    node.lifetime = structure_lifetime(g, best->path);
    for (std::size_t v : best->path.nodes) {
      node.members.push_back(g.nodes[v].id);
      alive[v] = 0;
    }
    res.trace.push_back({iteration, node, best->value, candidates.size()});
    res.structures.push_back(std::move(node));
  }

  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!alive[i]) continue;
    const TimedDatum& d = g.nodes[i];
    res.leftovers.push_back(
        {StorageKind::Register, 1, {d.id}, lifetime(d)});
  }
  return res;
}

} // namespace star
