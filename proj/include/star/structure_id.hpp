#pragma once

// Candidate FIFO/LIFO structures: label-homogeneous paths of the
// compatibility graph, plus their depth computation. Any path whose edges
// all carry one label is a compatibility clique, so its data can share one
// storage element of that kind.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "star/compat_graph.hpp"

namespace star {

/// Label-homogeneous path, nodes as indices into the graph's chronological
/// node order. Always length >= 2.
struct StructPath {
  StorageKind label = StorageKind::Fifo;
  std::vector<std::size_t> nodes;

  friend bool operator==(const StructPath&, const StructPath&) = default;
};

/// Longest label-restricted path from each start node of the label sub-DAG,
/// computed by dynamic programming. A start node is a node with no incoming
/// edge of the label; paths from any other node would be front-extendable
/// and therefore not maximal. Successor ties resolve to the chronologically
/// earliest node, so results are deterministic.
///
/// `alive` restricts the sub-DAG to a node subset (used by the assignment
/// loop); pass an empty vector for the whole graph.
inline std::vector<StructPath> longest_paths(const CompatGraph& g,
                                             StorageKind label,
                                             const std::vector<char>& alive) {
  const std::size_t n = g.size();
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  auto is_alive = [&](std::size_t i) { return alive.empty() || alive[i]; };

  std::vector<std::size_t> best(n, 0), succ(n, npos);
  for (std::size_t i = n; i-- > 0;) {
    if (!is_alive(i)) continue;
    best[i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!is_alive(j) || g.label(i, j) != label) continue;
      if (best[j] + 1 > best[i]) {
        best[i] = best[j] + 1;
        succ[i] = j;
      }
    }
  }

  std::vector<StructPath> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_alive(i) || best[i] < 2) continue;
    bool has_pred = false;
    for (std::size_t k = 0; k < i && !has_pred; ++k)
      has_pred = is_alive(k) && g.label(k, i) == label;
    if (has_pred) continue;

    StructPath p{label, {}};
    for (std::size_t v = i; v != npos; v = succ[v]) p.nodes.push_back(v);
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<StructPath> longest_paths(const CompatGraph& g,
                                             StorageKind label) {
  return longest_paths(g, label, {});
}

/// Depth of a LIFO path: the members nest, so all of them are resident at
/// the innermost point and the stack needs one cell per member.
inline std::size_t lifo_depth(const StructPath& p) {
  if (p.label != StorageKind::Lifo)
    throw Error("lifo_depth: path is not LIFO-labeled");
  return p.nodes.size();
}

/// Depth of a FIFO path: 1 + max over path nodes of the number of incoming
/// FIFO-labeled edges from other path nodes. Walks the path from its last
/// node backward and stops once the remaining nodes cannot beat the best
/// count found so far.
inline std::size_t fifo_depth(const CompatGraph& g, const StructPath& p) {
  if (p.label != StorageKind::Fifo)
    throw Error("fifo_depth: path is not FIFO-labeled");
  std::size_t best = 0;
  for (std::size_t pos = p.nodes.size(); pos-- > 1;) {
    if (best >= pos) break; // at most `pos` in-edges remain possible
    std::size_t count = 0;
    for (std::size_t q = 0; q < pos; ++q)
      if (g.label(p.nodes[q], p.nodes[pos]) == StorageKind::Fifo) ++count;
    best = std::max(best, count);
  }
  return 1 + best;
}

/// Peak number of simultaneously resident data: +1 at each production,
/// -1 after each last consumption, departures applied before arrivals on
/// the same cycle. Independent sizing oracle for the depth formulas above.
inline std::size_t occupancy_oracle(const std::vector<Interval>& lifetimes) {
  // (time, delta); sorting puts the -1 events first within one cycle
  std::vector<std::pair<Cycle, int>> events;
  events.reserve(lifetimes.size() * 2);
  for (const auto& iv : lifetimes) {
    events.push_back({iv.lo, +1});
    events.push_back({iv.hi, -1});
  }
  std::sort(events.begin(), events.end());
  long long cur = 0, peak = 0;
  for (const auto& [t, delta] : events) {
    (void)t;
    cur += delta;
    peak = std::max(peak, cur);
  }
  return static_cast<std::size_t>(peak);
}

inline std::size_t occupancy_oracle(const std::vector<TimedDatum>& data) {
  std::vector<Interval> ivs;
  ivs.reserve(data.size());
  for (const auto& d : data) ivs.push_back(lifetime(d));
  return occupancy_oracle(ivs);
}

} // namespace star
