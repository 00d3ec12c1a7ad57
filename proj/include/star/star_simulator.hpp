#pragma once

// Cycle-accurate replay of a netlist against its constraint set. The
// simulator is the end-to-end oracle: it executes the control schedule on
// real element state (queues, stacks, register slots) and fails on the
// first divergence from the constraints.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "star/netlist_backend.hpp"

namespace star {

/// Mutable contents of one storage element during simulation.
struct StorageState {
  std::size_t depth = 1;
  std::deque<std::string> items;
};

/// Applies one write micro-op (push/load). Returns an error message on
/// violation, nullopt on success.
inline std::optional<std::string> apply_write(StorageState& st, StorageKind kind,
                                              const std::string& datum) {
  if (st.items.size() + 1 > st.depth) {
    std::ostringstream os;
    os << "overflow: " << (kind == StorageKind::Register ? "load" : "push")
       << " of '" << datum << "' onto a full element (depth " << st.depth << ")";
    return os.str();
  }
  st.items.push_back(datum);
  return std::nullopt;
}

/// Applies one read micro-op (pop/drive). FIFO pops the head, LIFO the top,
/// a register drives its slot; the removed datum must be the scheduled one.
inline std::optional<std::string> apply_read(StorageState& st, StorageKind kind,
                                             const std::string& datum) {
  switch (kind) {
    case StorageKind::Fifo:
      if (st.items.empty()) return "pop on empty element";
      if (st.items.front() != datum)
        return "FIFO order violated: expected '" + datum + "', head is '" +
               st.items.front() + "'";
      st.items.pop_front();
      return std::nullopt;
    case StorageKind::Lifo:
      if (st.items.empty()) return "pop on empty element";
      if (st.items.back() != datum)
        return "LIFO order violated: expected '" + datum + "', top is '" +
               st.items.back() + "'";
      st.items.pop_back();
      return std::nullopt;
    case StorageKind::Register:
      if (st.items.empty()) return "drive on empty register";
      if (st.items.front() != datum)
        return "register value mismatch: expected '" + datum + "', slot holds '" +
               st.items.front() + "'";
      st.items.pop_front();
      return std::nullopt;
  }
  return "unknown storage kind";
}

struct CycleRecord {
  Cycle t = 0;
  std::vector<MicroOp> ops;
  std::map<std::string, std::size_t> occupancy;          // element -> items
  std::vector<std::pair<std::string, std::string>> outputs; // (port, datum)
};

struct SimTrace {
  std::vector<CycleRecord> cycles;
  bool passed = false;
  std::string failure;   // first divergence; empty when passed
  Cycle failure_time = -1;
  std::map<std::string, std::size_t> peak_occupancy;
  std::size_t peak_total = 0;
  std::size_t cells = 0; // sum of element depths
};

namespace detail {

// A write at t belongs to the mode with lo <= t < hi, a read to the mode
// with lo < t <= hi; modes touching at a boundary stay unambiguous because
// lifetimes are strict (tau_min < tau_max).
inline const ElementMode* mode_at(const Element& e, Cycle t, bool read) {
  for (const auto& m : e.modes) {
    if (read ? (m.span.lo < t && t <= m.span.hi)
             : (m.span.lo <= t && t < m.span.hi))
      return &m;
  }
  return nullptr;
}

} // namespace detail

/// Replays the schedule. Throws on a malformed netlist (unknown element,
/// unbound datum); constraint divergences land in the returned verdict.
inline SimTrace simulate(const Netlist& n, const ConstraintSet& cs) {
  SimTrace trace;
  trace.cells = 0;
  for (const auto& e : n.elements) trace.cells += e.depth;

  // structural sanity: bindings and ops reference real things
  std::map<std::string, StorageState> state;
  for (const auto& e : n.elements) {
    if (state.count(e.id)) throw Error("duplicate element id '" + e.id + "'");
    state[e.id] = {e.depth, {}};
  }
  for (const auto& d : cs.data) {
    auto it = n.binding.find(d.id);
    if (it == n.binding.end())
      throw Error("datum '" + d.id + "' is not bound to any element");
    if (!n.find_element(it->second))
      throw Error("datum '" + d.id + "' bound to unknown element '" +
                  it->second + "'");
  }
  for (const auto& op : n.schedule) {
    if (!n.find_element(op.element))
      throw Error("op on unknown element '" + op.element + "'");
    if (!cs.find_datum(op.datum))
      throw Error("op on unknown datum '" + op.datum + "'");
  }

  auto fail = [&](Cycle t, const std::string& message) {
    trace.passed = false;
    trace.failure = message;
    trace.failure_time = t;
  };

  // schedule completeness against the constraints
  {
    std::map<std::string, std::vector<const MicroOp*>> writes, reads;
    for (const auto& op : n.schedule)
      (is_read(op.verb) ? reads : writes)[op.datum].push_back(&op);
    for (const auto& d : cs.data) {
      const auto& elem = n.binding.at(d.id);
      auto& w = writes[d.id];
      if (w.size() != 1 || w[0]->t != d.write_time ||
          w[0]->port != d.write_port || w[0]->element != elem) {
        fail(d.write_time, "schedule mismatch: datum '" + d.id +
                               "' is not written once at cycle " +
                               std::to_string(d.write_time) + " on port '" +
                               d.write_port + "'");
        return trace;
      }
      auto& r = reads[d.id];
      if (r.size() != d.reads.size()) {
        fail(d.write_time, "schedule mismatch: datum '" + d.id + "' has " +
                               std::to_string(r.size()) + " scheduled reads, " +
                               "constraints require " +
                               std::to_string(d.reads.size()));
        return trace;
      }
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i]->t != d.reads[i].t || r[i]->port != d.reads[i].port ||
            r[i]->element != elem) {
          fail(d.reads[i].t, "schedule mismatch: read " + std::to_string(i) +
                                 " of datum '" + d.id + "' diverges from the "
                                 "constraints");
          return trace;
        }
      }
    }
    std::size_t expected = 0;
    for (const auto& d : cs.data) expected += 1 + d.reads.size();
    if (n.schedule.size() != expected) {
      fail(0, "schedule mismatch: " + std::to_string(n.schedule.size()) +
                  " ops scheduled, constraints imply " + std::to_string(expected));
      return trace;
    }
  }

  Cycle horizon = -1;
  for (const auto& op : n.schedule) horizon = std::max(horizon, op.t);

  std::size_t next_op = 0;
  for (Cycle t = 0; t <= horizon; ++t) {
    CycleRecord rec;
    rec.t = t;
    std::set<std::string> ports_read, ports_written;

    // reads (pops/drives) first: a cell freed at tau_max is reusable by a
    // write on the same cycle
    std::size_t cycle_begin = next_op;
    while (next_op < n.schedule.size() && n.schedule[next_op].t == t) ++next_op;
    for (std::size_t pass = 0; pass < 2; ++pass) {
      for (std::size_t i = cycle_begin; i < next_op; ++i) {
        const MicroOp& op = n.schedule[i];
        bool read = is_read(op.verb);
        if ((pass == 0) != read) continue;
        const Element& elem = *n.find_element(op.element);
        const ElementMode* mode = detail::mode_at(elem, t, read);
        if (!mode) {
          fail(t, "op on element '" + op.element + "' at cycle " +
                      std::to_string(t) + " outside every mode interval");
          trace.cycles.push_back(std::move(rec));
          return trace;
        }
        StorageState& st = state[op.element];
        std::optional<std::string> err;
        if (read) {
          if (!ports_read.insert(op.port).second) {
            err = "port collision: two reads on '" + op.port + "'";
          } else {
            err = apply_read(st, mode->kind, op.datum);
            if (!err) rec.outputs.push_back({op.port, op.datum});
          }
        } else {
          if (!ports_written.insert(op.port).second)
            err = "port collision: two writes on '" + op.port + "'";
          else
            err = apply_write(st, mode->kind, op.datum);
        }
        if (err) {
          fail(t, "element '" + op.element + "' at cycle " + std::to_string(t) +
                      ": " + *err);
          trace.cycles.push_back(std::move(rec));
          return trace;
        }
        rec.ops.push_back(op);
      }
    }

    std::size_t total = 0;
    for (const auto& [id, st] : state) {
      rec.occupancy[id] = st.items.size();
      auto& peak = trace.peak_occupancy[id];
      peak = std::max(peak, st.items.size());
      total += st.items.size();
    }
    trace.peak_total = std::max(trace.peak_total, total);
    trace.cycles.push_back(std::move(rec));
  }

  for (const auto& [id, st] : state) {
    if (!st.items.empty()) {
      fail(horizon, "element '" + id + "' still holds " +
                        std::to_string(st.items.size()) +
                        " datum(s) after the last scheduled cycle");
      return trace;
    }
  }

  trace.passed = true;
  return trace;
}

/// One JSON line per cycle plus a final verdict line.
inline std::string trace_jsonl(const SimTrace& trace) {
  std::ostringstream os;
  for (const auto& rec : trace.cycles) {
    nlohmann::json j;
    j["t"] = rec.t;
    j["ops"] = nlohmann::json::array();
    for (const auto& op : rec.ops)
      j["ops"].push_back({{"op", std::string(verb_name(op.verb))},
                          {"elem", op.element},
                          {"port", op.port},
                          {"datum", op.datum}});
    j["occ"] = rec.occupancy;
    j["out"] = nlohmann::json::array();
    for (const auto& [port, datum] : rec.outputs)
      j["out"].push_back({port, datum});
    os << j.dump() << "\n";
  }
  nlohmann::json verdict;
  verdict["verdict"] = trace.passed ? "pass" : "fail";
  if (!trace.passed) {
    verdict["failure"] = trace.failure;
    verdict["t"] = trace.failure_time;
  }
  os << verdict.dump() << "\n";
  return os.str();
}

} // namespace star
