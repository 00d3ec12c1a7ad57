#pragma once

// Second-level optimization: structures whose lifetimes never overlap can
// share one physical element. Only Register-compatibility matters here, so
// the pass greedily merges disjoint-lifetime elements, keeping multi-interval
// nodes mergeable again until no pair is left.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "star/allocation.hpp"

namespace star {

/// Physical element after merging: one cell bank of `depth` cells that
/// behaves as each member structure's kind during that structure's lifetime.
/// All mode intervals are pairwise disjoint.
struct MergedElement {
  std::size_t depth = 0;
  std::vector<HierNode> modes; // sorted by lifetime start

  std::vector<Interval> lifetimes() const {
    std::vector<Interval> v;
    v.reserve(modes.size());
    for (const auto& m : modes) v.push_back(m.lifetime);
    return v;
  }

  friend bool operator==(const MergedElement&, const MergedElement&) = default;
};

inline MergedElement wrap(const HierNode& n) { return {n.depth, {n}}; }

/// True iff no lifetime interval of x overlaps one of y. Intervals touching
/// at a single cycle count as disjoint (the freed cell is reusable on the
/// same cycle).
inline bool register_compatible(const MergedElement& x, const MergedElement& y) {
  for (const auto& a : x.modes)
    for (const auto& b : y.modes)
      if (a.lifetime.overlaps(b.lifetime)) return false;
  return true;
}

inline bool register_compatible(const HierNode& x, const HierNode& y) {
  return !x.lifetime.overlaps(y.lifetime);
}

inline std::size_t total_cells(const std::vector<MergedElement>& elems) {
  return std::accumulate(elems.begin(), elems.end(), std::size_t{0},
                         [](std::size_t acc, const MergedElement& e) {
                           return acc + e.depth;
                         });
}

inline std::string describe(const MergedElement& e) {
  std::ostringstream os;
  for (std::size_t i = 0; i < e.modes.size(); ++i) {
    if (i) os << '+';
    os << kind_name(e.modes[i].kind) << '[';
    for (std::size_t m = 0; m < e.modes[i].members.size(); ++m)
      os << (m ? "," : "") << e.modes[i].members[m];
    os << ']';
  }
  return os.str();
}

struct MergeStep {
  std::string into;
  std::string from;
  std::size_t cells_before = 0;
  std::size_t cells_after = 0;
};

struct MergeResult {
  std::vector<MergedElement> elements;
  std::vector<MergeStep> trace;
};

/// Greedy merge pass. Each round picks the compatible pair saving the most
/// cells (the merged depth is the max of the two, so the saving is the min);
/// ties resolve to the earliest-created pair. Total cells never increase.
/// The Weights parameter is part of the interface for symmetry with
/// assignment; cell count is the primary objective.
inline MergeResult optimize(std::vector<MergedElement> elems,
                            const Weights& = {}) {
  MergeResult res;
  const std::size_t n = elems.size();
  std::vector<char> alive(n, 1);

  // compat[i][j] cached; refreshed only for the surviving merge partner
  std::vector<char> compat(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      compat[i * n + j] = register_compatible(elems[i], elems[j]);

  while (true) {
    std::size_t best_i = n, best_j = n, best_save = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j] || !compat[i * n + j]) continue;
        std::size_t save = std::min(elems[i].depth, elems[j].depth);
        if (save > best_save) {
          best_save = save;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i == n) break;

    std::size_t before = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (alive[i]) before += elems[i].depth;

    MergedElement& into = elems[best_i];
    MergedElement& from = elems[best_j];
    res.trace.push_back({describe(into), describe(from), before, before - best_save});

    into.depth = std::max(into.depth, from.depth);
    into.modes.insert(into.modes.end(), from.modes.begin(), from.modes.end());
    std::sort(into.modes.begin(), into.modes.end(),
              [](const HierNode& a, const HierNode& b) {
                return a.lifetime.lo < b.lifetime.lo;
              });
    alive[best_j] = 0;

    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == best_i) continue;
      std::size_t lo = std::min(k, best_i), hi = std::max(k, best_i);
      compat[lo * n + hi] = register_compatible(elems[k], elems[best_i]);
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) res.elements.push_back(std::move(elems[i]));
  return res;
}

inline MergeResult optimize(const std::vector<HierNode>& nodes,
                            const Weights& w = {}) {
  std::vector<MergedElement> elems;
  elems.reserve(nodes.size());
  for (const auto& n : nodes) elems.push_back(wrap(n));
  return optimize(std::move(elems), w);
}

} // namespace star
