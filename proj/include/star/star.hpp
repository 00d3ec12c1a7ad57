#pragma once

// Umbrella header: the whole synthesis flow in one include.

#include "star/allocation.hpp"
#include "star/compat_graph.hpp"
#include "star/constraint_model.hpp"
#include "star/interleaver_gen.hpp"
#include "star/merge_optimizer.hpp"
#include "star/netlist_backend.hpp"
#include "star/star_simulator.hpp"
#include "star/structure_id.hpp"

namespace star {

inline constexpr std::string_view version = "1.0.0";
inline constexpr int constraint_schema_version = 1;
inline constexpr int netlist_schema_version = 1;

/// Everything one synthesis run produces.
struct FlowResult {
  CompatGraph graph;
  AssignResult assignment;
  MergeResult merge;
  Netlist netlist;

  std::string report(const ConstraintSet& cs) const {
    return write_report(cs, graph, assignment, merge, netlist);
  }
};

/// Full pipeline: graph construction, structure assignment, merging and
/// netlist emission.
inline FlowResult run_flow(const ConstraintSet& cs, const Weights& w = {}) {
  FlowResult r;
  r.graph = build_graph(cs);
  r.assignment = assign(r.graph, w);
  r.merge = optimize(r.assignment.all(), w);
  r.netlist = emit(r.merge.elements, cs);
  return r;
}

} // namespace star
