#pragma once

// Pairwise storage-compatibility classification and the labeled
// chronological DAG built from it. Edge labels name the storage kind that
// can hold both endpoints: R(egister), F(IFO) or L(IFO).

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "star/constraint_model.hpp"

namespace star {

enum class StorageKind : std::uint8_t { Register, Fifo, Lifo };

inline char kind_letter(StorageKind k) {
  switch (k) {
    case StorageKind::Register: return 'R';
    case StorageKind::Fifo: return 'F';
    case StorageKind::Lifo: return 'L';
  }
  return '?';
}

inline std::string_view kind_name(StorageKind k) {
  switch (k) {
    case StorageKind::Register: return "register";
    case StorageKind::Fifo: return "fifo";
    case StorageKind::Lifo: return "lifo";
  }
  return "?";
}

inline std::optional<StorageKind> parse_kind(std::string_view s) {
  if (s == "register" || s == "R") return StorageKind::Register;
  if (s == "fifo" || s == "F") return StorageKind::Fifo;
  if (s == "lifo" || s == "L") return StorageKind::Lifo;
  return std::nullopt;
}

/// Classifies an ordered pair of data: which storage kind can hold both.
/// Precondition: a precedes b in the canonical chronological order.
///
/// Register  : tau_min(b) >= tau_max(a)          (non-overlapping lifetimes;
///             a cell freed on a cycle is reusable the same cycle)
/// FIFO      : tau_min(b) > tau_min(a) and tau_first(b) > tau_max(a)
///             and tau_min(b) < tau_max(a)       (partial overlap, b outlives a)
/// LIFO      : tau_min(b) > tau_min(a) and tau_first(a) > tau_max(b)
///             (b nests inside a's pre-read window)
/// otherwise : incompatible (nullopt) -- two distinct elements are needed.
///
/// For single-read data the three predicates are mutually exclusive; with
/// multiple reads FIFO wins over LIFO by the evaluation order above.
inline std::optional<StorageKind> classify_pair(const TimedDatum& a,
                                                const TimedDatum& b) {
  if (!chronological_less(a, b))
    throw Error("classify_pair: '" + a.id + "' does not precede '" + b.id +
                "' chronologically");
  if (b.tau_min() >= a.tau_max()) return StorageKind::Register;
  if (b.tau_min() > a.tau_min() && b.tau_first() > a.tau_max() &&
      b.tau_min() < a.tau_max())
    return StorageKind::Fifo;
  if (b.tau_min() > a.tau_min() && a.tau_first() > b.tau_max())
    return StorageKind::Lifo;
  return std::nullopt;
}

struct CompatEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  StorageKind label = StorageKind::Register;

  friend bool operator==(const CompatEdge&, const CompatEdge&) = default;
};

/// Chronological compatibility DAG. Nodes are the data sorted by the
/// canonical chronological order; edges only go forward, so the graph is
/// acyclic by construction and holds at most n(n-1)/2 edges. The polar
/// source and sink nodes stay implicit.
struct CompatGraph {
  std::vector<TimedDatum> nodes;
  std::vector<CompatEdge> edges;

  std::size_t size() const { return nodes.size(); }

  /// Label of the ordered pair (i, j), i < j; nullopt when incompatible.
  std::optional<StorageKind> label(std::size_t i, std::size_t j) const {
    std::uint8_t v = matrix[i * nodes.size() + j];
    if (v == 0) return std::nullopt;
    return static_cast<StorageKind>(v - 1);
  }

  std::size_t index_of(std::string_view id) const {
    auto it = index.find(std::string(id));
    if (it == index.end()) throw Error("unknown datum '" + std::string(id) + "'");
    return it->second;
  }

  // pair label matrix, 0 = incompatible, otherwise StorageKind + 1
  std::vector<std::uint8_t> matrix;
  std::unordered_map<std::string, std::size_t> index;
};

/// Builds the compatibility graph for a valid, single-read constraint set.
inline CompatGraph build_graph(const ConstraintSet& cs) {
  CompatGraph g;
  g.nodes = cs.data;
  for (const auto& d : g.nodes)
    if (!d.single_read())
      throw ValidationError({{"multi-read", d.id,
                              "the synthesis pipeline accepts single-read "
                              "data only"}});
  std::sort(g.nodes.begin(), g.nodes.end(), chronological_less);

  const std::size_t n = g.nodes.size();
  g.matrix.assign(n * n, 0);
  g.index.reserve(n);
  for (std::size_t i = 0; i < n; ++i) g.index.emplace(g.nodes[i].id, i);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (auto k = classify_pair(g.nodes[i], g.nodes[j])) {
        g.matrix[i * n + j] = static_cast<std::uint8_t>(*k) + 1;
        g.edges.push_back({i, j, *k});
      }
    }
  }
  return g;
}

/// DOT rendering of the graph; the implicit source/sink are omitted.
inline std::string export_dot(const CompatGraph& g) {
  std::ostringstream os;
  os << "digraph compat {\n  rankdir=LR;\n";
  for (const auto& d : g.nodes)
    os << "  \"" << d.id << "\" [label=\"" << d.id << "\\n[" << d.tau_min()
       << "," << d.tau_max() << "]\"];\n";
  for (const auto& e : g.edges)
    os << "  \"" << g.nodes[e.from].id << "\" -> \"" << g.nodes[e.to].id
       << "\" [label=\"" << kind_letter(e.label) << "\"];\n";
  os << "}\n";
  return os.str();
}

/// JSON dump (nodes in chronological order, edge triples) for golden tests.
inline nlohmann::json graph_json(const CompatGraph& g) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& d : g.nodes)
    j["nodes"].push_back({{"id", d.id}, {"lo", d.tau_min()}, {"hi", d.tau_max()}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back({{"from", g.nodes[e.from].id},
                          {"to", g.nodes[e.to].id},
                          {"label", std::string(1, kind_letter(e.label))}});
  return j;
}

} // namespace star
