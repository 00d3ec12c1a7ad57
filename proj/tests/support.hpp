#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately recompute results through a different route than the library
// (integer occupancy sets, exhaustive partition search) so they can act as
// ground truth.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "star/star.hpp"

namespace support {

inline star::TimedDatum datum(std::string id, star::Cycle write,
                              star::Cycle read, std::string write_port = "in",
                              std::string read_port = "out") {
  return {std::move(id), std::move(write_port), write, {{std::move(read_port), read}}};
}

/// The 6-datum instance: writes a,c,b,e,f,d at cycles 0..5, reads
/// c,a,e,b,d,f at cycles 2..7. Lifetimes a=[0,3], c=[1,2], b=[2,5],
/// e=[3,4], f=[4,7], d=[5,6].
inline const char* six_datum_json() {
  return R"({
    "ports": [
      {"name": "in", "dir": "input"},
      {"name": "out", "dir": "output"}
    ],
    "data": [
      {"id": "a", "write": {"port": "in", "t": 0}, "reads": [{"port": "out", "t": 3}]},
      {"id": "c", "write": {"port": "in", "t": 1}, "reads": [{"port": "out", "t": 2}]},
      {"id": "b", "write": {"port": "in", "t": 2}, "reads": [{"port": "out", "t": 5}]},
      {"id": "e", "write": {"port": "in", "t": 3}, "reads": [{"port": "out", "t": 4}]},
      {"id": "f", "write": {"port": "in", "t": 4}, "reads": [{"port": "out", "t": 7}]},
      {"id": "d", "write": {"port": "in", "t": 5}, "reads": [{"port": "out", "t": 6}]}
    ]
  })";
}

inline star::ConstraintSet six_datum_set() {
  return star::parse_constraints(six_datum_json());
}

/// Independent pair classifier built on explicit occupancy-cycle sets
/// (a datum occupies the integer cycles [tau_min, tau_max)). Register iff
/// the sets are disjoint; FIFO iff they overlap, b starts later and ends
/// later; LIFO iff they overlap and b is strictly nested inside a.
inline std::optional<star::StorageKind> set_oracle_classify(
    const star::TimedDatum& a, const star::TimedDatum& b) {
  std::set<star::Cycle> ga, gb;
  for (star::Cycle t = a.tau_min(); t < a.tau_max(); ++t) ga.insert(t);
  for (star::Cycle t = b.tau_min(); t < b.tau_max(); ++t) gb.insert(t);
  bool overlap = false;
  for (star::Cycle t : gb) overlap |= ga.count(t) > 0;
  if (!overlap) return star::StorageKind::Register;
  if (*gb.begin() > *ga.begin() && *gb.rbegin() > *ga.rbegin())
    return star::StorageKind::Fifo;
  if (*gb.begin() > *ga.begin() && *gb.rbegin() < *ga.rbegin())
    return star::StorageKind::Lifo;
  return std::nullopt;
}

/// Optimal merge partition by exhaustive search: minimal total cells over
/// all groupings of the nodes into pairwise register-compatible groups.
/// Only meant for small inputs (Bell(8) partitions).
inline std::size_t optimal_merge_cells(const std::vector<star::HierNode>& nodes) {
  std::vector<std::vector<std::size_t>> groups;
  std::size_t best = ~std::size_t{0};

  auto group_ok = [&](const std::vector<std::size_t>& g, std::size_t cand) {
    for (std::size_t i : g)
      if (!star::register_compatible(nodes[i], nodes[cand])) return false;
    return true;
  };

  auto cells = [&]() {
    std::size_t total = 0;
    for (const auto& g : groups) {
      std::size_t depth = 0;
      for (std::size_t i : g) depth = std::max(depth, nodes[i].depth);
      total += depth;
    }
    return total;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    if (next == nodes.size()) {
      best = std::min(best, cells());
      return;
    }
    // index-based: recursion appends to `groups`, which may reallocate
    std::size_t group_count = groups.size();
    for (std::size_t gi = 0; gi < group_count; ++gi) {
      if (!group_ok(groups[gi], next)) continue;
      groups[gi].push_back(next);
      rec(next + 1);
      groups[gi].pop_back();
    }
    groups.push_back({next});
    rec(next + 1);
    groups.pop_back();
  };
  rec(0);
  return best;
}

/// Randomized valid single-read constraint sets, mixing a streaming profile
/// (short random lifetimes), a permutation profile (frame in, permuted frame
/// out) and a multi-port profile.
inline star::ConstraintSet random_constraint_set(std::mt19937_64& rng,
                                                 std::size_t max_n) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + rng() % (hi - lo + 1);
  };
  std::size_t n = pick(1, max_n);
  int profile = static_cast<int>(rng() % 3);

  star::ConstraintSet cs;
  if (profile == 2) {
    cs.ports = {{"in0", star::PortDir::Input},
                {"in1", star::PortDir::Input},
                {"out0", star::PortDir::Output},
                {"out1", star::PortDir::Output}};
  } else {
    cs.ports = {{"in", star::PortDir::Input}, {"out", star::PortDir::Output}};
  }

  if (profile == 1) {
    // permuted frame with a feasible latency
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> rank(n);
    for (std::size_t k = 0; k < n; ++k) rank[perm[k]] = k;
    star::Cycle period = static_cast<star::Cycle>(pick(1, 2));
    star::Cycle min_latency = 1;
    for (std::size_t i = 0; i < n; ++i)
      min_latency = std::max<star::Cycle>(
          min_latency,
          static_cast<star::Cycle>(i) * period -
              static_cast<star::Cycle>(rank[i]) * period + 1);
    star::Cycle latency = min_latency + static_cast<star::Cycle>(rng() % (n + 1));
    for (std::size_t i = 0; i < n; ++i) {
      cs.data.push_back(support::datum(
          "p" + std::to_string(i), static_cast<star::Cycle>(i) * period,
          latency + static_cast<star::Cycle>(rank[i]) * period));
    }
  } else {
    // streaming: increasing writes, bounded random lifetimes; read-port
    // collisions resolved by bumping the read time
    std::vector<std::string> ins, outs;
    for (const auto& p : cs.ports)
      (p.dir == star::PortDir::Input ? ins : outs).push_back(p.name);
    std::map<std::string, std::set<star::Cycle>> used_w, used_r;
    star::Cycle t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      t += static_cast<star::Cycle>(rng() % 3);
      const std::string& wp = ins[rng() % ins.size()];
      star::Cycle wt = t;
      while (used_w[wp].count(wt)) ++wt;
      used_w[wp].insert(wt);
      const std::string& rp = outs[rng() % outs.size()];
      star::Cycle rt = wt + 1 + static_cast<star::Cycle>(rng() % (2 * max_n));
      while (used_r[rp].count(rt)) ++rt;
      used_r[rp].insert(rt);
      cs.data.push_back(support::datum("s" + std::to_string(i), wt, rt, wp, rp));
      if (ins.size() == 1 || rng() % 2) ++t;
    }
  }
  star::canonicalize(cs);
  return cs;
}

} // namespace support
