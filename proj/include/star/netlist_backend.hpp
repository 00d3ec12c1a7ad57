#pragma once

// Final architecture emission: physical storage elements with their
// per-interval behavior, the datum->element binding, the interconnect
// implied by it and the per-cycle control schedule. The netlist JSON plus
// the constraint file fully determine a simulation.

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "star/merge_optimizer.hpp"

namespace star {

struct ElementMode {
  Interval span;
  StorageKind kind = StorageKind::Register;

  friend bool operator==(const ElementMode&, const ElementMode&) = default;
};

struct Element {
  std::string id;
  std::size_t depth = 0;
  std::vector<ElementMode> modes; // sorted by span start, pairwise disjoint

  friend bool operator==(const Element&, const Element&) = default;
};

enum class OpVerb : std::uint8_t { Push, Pop, Load, Drive };

inline bool is_read(OpVerb v) { return v == OpVerb::Pop || v == OpVerb::Drive; }

inline std::string_view verb_name(OpVerb v) {
  switch (v) {
    case OpVerb::Push: return "push";
    case OpVerb::Pop: return "pop";
    case OpVerb::Load: return "load";
    case OpVerb::Drive: return "drive";
  }
  return "?";
}

inline std::optional<OpVerb> parse_verb(std::string_view s) {
  if (s == "push") return OpVerb::Push;
  if (s == "pop") return OpVerb::Pop;
  if (s == "load") return OpVerb::Load;
  if (s == "drive") return OpVerb::Drive;
  return std::nullopt;
}

/// One scheduled access: a write moves a datum from an input port into an
/// element (push/load), a read moves it from an element to an output port
/// (pop/drive).
struct MicroOp {
  Cycle t = 0;
  OpVerb verb = OpVerb::Push;
  std::string element;
  std::string port;
  std::string datum;

  friend bool operator==(const MicroOp&, const MicroOp&) = default;
};

struct Netlist {
  std::vector<Element> elements;
  std::map<std::string, std::string> binding; // datum -> element id
  std::vector<MicroOp> schedule;              // (t, reads first, element, datum)

  // interconnect implied by the bound data
  std::map<std::string, std::set<std::string>> fan_in;  // input port -> elements
  std::map<std::string, std::set<std::string>> fan_out; // element -> output ports

  const Element* find_element(std::string_view id) const {
    for (const auto& e : elements)
      if (e.id == id) return &e;
    return nullptr;
  }

  friend bool operator==(const Netlist& a, const Netlist& b) {
    return a.elements == b.elements && a.binding == b.binding &&
           a.schedule == b.schedule;
  }
};

namespace detail {

inline bool op_order(const MicroOp& a, const MicroOp& b) {
  auto key = [](const MicroOp& op) {
    return std::tuple(op.t, is_read(op.verb) ? 0 : 1, std::string_view(op.element),
                      std::string_view(op.datum), std::string_view(op.port));
  };
  return key(a) < key(b);
}

// pure-kind elements take the kind's prefix, mixed ones "multi"
inline std::string element_prefix(const MergedElement& e) {
  bool mixed = false;
  for (const auto& m : e.modes) mixed |= m.kind != e.modes.front().kind;
  if (mixed) return "multi";
  switch (e.modes.front().kind) {
    case StorageKind::Fifo: return "fifo";
    case StorageKind::Lifo: return "lifo";
    case StorageKind::Register: return "reg";
  }
  return "elem";
}

} // namespace detail

/// Builds the netlist for a merged element list covering every datum of the
/// constraint set. Errors if some datum is unbound or bound twice.
inline Netlist emit(const std::vector<MergedElement>& merged,
                    const ConstraintSet& cs) {
  Netlist n;

  std::map<std::string, StorageKind> datum_kind;
  std::map<std::string, int> prefix_counter;
  for (const auto& me : merged) {
    Element e;
    e.depth = me.depth;
    std::string prefix = detail::element_prefix(me);
    e.id = prefix + std::to_string(prefix_counter[prefix]++);
    for (const auto& mode : me.modes) {
      e.modes.push_back({mode.lifetime, mode.kind});
      for (const auto& member : mode.members) {
        if (n.binding.count(member))
          throw Error("datum '" + member + "' bound to two elements");
        n.binding[member] = e.id;
        datum_kind[member] = mode.kind;
      }
    }
    std::sort(e.modes.begin(), e.modes.end(),
              [](const ElementMode& a, const ElementMode& b) {
                return a.span.lo < b.span.lo;
              });
    n.elements.push_back(std::move(e));
  }

  for (const auto& d : cs.data) {
    auto it = n.binding.find(d.id);
    if (it == n.binding.end()) throw Error("datum '" + d.id + "' unbound");
    const std::string& elem = it->second;
    StorageKind kind = datum_kind.at(d.id);
    OpVerb w = kind == StorageKind::Register ? OpVerb::Load : OpVerb::Push;
    OpVerb r = kind == StorageKind::Register ? OpVerb::Drive : OpVerb::Pop;
    n.schedule.push_back({d.write_time, w, elem, d.write_port, d.id});
    for (const auto& rd : d.reads)
      n.schedule.push_back({rd.t, r, elem, rd.port, d.id});
    n.fan_in[d.write_port].insert(elem);
    for (const auto& rd : d.reads) n.fan_out[elem].insert(rd.port);
  }
  std::sort(n.schedule.begin(), n.schedule.end(), detail::op_order);
  return n;
}

/// Canonical netlist JSON (sorted keys, schedule grouped by cycle).
inline std::string write_netlist(const Netlist& n) {
  nlohmann::json j;
  j["elements"] = nlohmann::json::array();
  for (const auto& e : n.elements) {
    nlohmann::json ej;
    ej["id"] = e.id;
    ej["depth"] = e.depth;
    ej["modes"] = nlohmann::json::array();
    for (const auto& m : e.modes)
      ej["modes"].push_back({{"from", m.span.lo},
                             {"to", m.span.hi},
                             {"kind", std::string(kind_name(m.kind))}});
    j["elements"].push_back(std::move(ej));
  }
  j["binding"] = nlohmann::json::object();
  for (const auto& [datum, elem] : n.binding) j["binding"][datum] = elem;
  j["schedule"] = nlohmann::json::array();
  for (std::size_t i = 0; i < n.schedule.size();) {
    Cycle t = n.schedule[i].t;
    nlohmann::json ops = nlohmann::json::array();
    for (; i < n.schedule.size() && n.schedule[i].t == t; ++i) {
      const MicroOp& op = n.schedule[i];
      ops.push_back({{"op", std::string(verb_name(op.verb))},
                     {"elem", op.element},
                     {"port", op.port},
                     {"datum", op.datum}});
    }
    j["schedule"].push_back({{"t", t}, {"ops", std::move(ops)}});
  }
  return j.dump(2) + "\n";
}

/// Parses netlist JSON back into a Netlist; interconnect is rebuilt from
/// the schedule.
inline Netlist parse_netlist(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("netlist file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("netlist file: expected an object");

  Netlist n;
  const auto& elements = detail::require_field(j, "elements", "netlist");
  if (!elements.is_array()) throw ParseError("elements: expected an array");
  for (const auto& ej : elements) {
    Element e;
    e.id = detail::require_string(ej, "id", "element");
    const auto& dj = detail::require_field(ej, "depth", "element");
    if (!dj.is_number_unsigned()) throw ParseError("element.depth: expected a count");
    e.depth = dj.get<std::size_t>();
    const auto& modes = detail::require_field(ej, "modes", "element");
    if (!modes.is_array()) throw ParseError("element.modes: expected an array");
    for (const auto& mj : modes) {
      ElementMode m;
      m.span.lo = detail::require_cycle(mj, "from", "mode");
      m.span.hi = detail::require_cycle(mj, "to", "mode");
      auto kind = parse_kind(detail::require_string(mj, "kind", "mode"));
      if (!kind) throw ParseError("mode.kind: expected fifo, lifo or register");
      m.kind = *kind;
      e.modes.push_back(m);
    }
    n.elements.push_back(std::move(e));
  }

  const auto& binding = detail::require_field(j, "binding", "netlist");
  if (!binding.is_object()) throw ParseError("binding: expected an object");
  for (auto it = binding.begin(); it != binding.end(); ++it) {
    if (!it.value().is_string()) throw ParseError("binding: expected element ids");
    n.binding[it.key()] = it.value().get<std::string>();
  }

  const auto& schedule = detail::require_field(j, "schedule", "netlist");
  if (!schedule.is_array()) throw ParseError("schedule: expected an array");
  for (const auto& cj : schedule) {
    Cycle t = detail::require_cycle(cj, "t", "schedule entry");
    const auto& ops = detail::require_field(cj, "ops", "schedule entry");
    if (!ops.is_array()) throw ParseError("schedule.ops: expected an array");
    for (const auto& oj : ops) {
      MicroOp op;
      op.t = t;
      auto verb = parse_verb(detail::require_string(oj, "op", "op"));
      if (!verb) throw ParseError("op.op: expected push, pop, load or drive");
      op.verb = *verb;
      op.element = detail::require_string(oj, "elem", "op");
      op.port = detail::require_string(oj, "port", "op");
      op.datum = detail::require_string(oj, "datum", "op");
      n.schedule.push_back(std::move(op));
    }
  }
  std::sort(n.schedule.begin(), n.schedule.end(), detail::op_order);

  for (const auto& op : n.schedule) {
    if (is_read(op.verb))
      n.fan_out[op.element].insert(op.port);
    else
      n.fan_in[op.port].insert(op.element);
  }
  return n;
}

/// Architecture summary: element counts by kind, depth extremes, cell total.
struct ReportStats {
  std::size_t fifo = 0;
  std::size_t lifo = 0;
  std::size_t registers = 0;
  std::size_t multi = 0; // merged elements mixing storage kinds
  std::optional<std::size_t> fifo_max, fifo_min, lifo_max, lifo_min;
  std::size_t total_cells = 0;
  std::size_t data_count = 0;

  std::size_t total() const { return fifo + lifo + registers + multi; }
};

inline ReportStats report_stats(const Netlist& n) {
  ReportStats s;
  s.data_count = n.binding.size();
  auto update = [](std::optional<std::size_t>& mx, std::optional<std::size_t>& mn,
                   std::size_t depth) {
    mx = std::max(mx.value_or(depth), depth);
    mn = std::min(mn.value_or(depth), depth);
  };
  for (const auto& e : n.elements) {
    s.total_cells += e.depth;
    bool mixed = false;
    for (const auto& m : e.modes) mixed |= m.kind != e.modes.front().kind;
    if (mixed) {
      ++s.multi;
      continue;
    }
    switch (e.modes.empty() ? StorageKind::Register : e.modes.front().kind) {
      case StorageKind::Fifo:
        ++s.fifo;
        update(s.fifo_max, s.fifo_min, e.depth);
        break;
      case StorageKind::Lifo:
        ++s.lifo;
        update(s.lifo_max, s.lifo_min, e.depth);
        break;
      case StorageKind::Register:
        ++s.registers;
        break;
    }
  }
  return s;
}

namespace detail {

inline std::string opt_depth(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : "-";
}

} // namespace detail

/// Pseudo-HDL sketch of the architecture, for human inspection only.
inline std::string write_pseudo_hdl(const Netlist& n) {
  std::ostringstream os;
  os << "component star_adapter\n";
  std::set<std::string> in_ports, out_ports;
  for (const auto& [port, elems] : n.fan_in) (void)elems, in_ports.insert(port);
  for (const auto& [elem, ports] : n.fan_out)
    (void)elem, out_ports.insert(ports.begin(), ports.end());
  for (const auto& p : in_ports) os << "  port " << p << " : in\n";
  for (const auto& p : out_ports) os << "  port " << p << " : out\n";
  for (const auto& e : n.elements) {
    os << "  element " << e.id << " : depth " << e.depth;
    for (const auto& m : e.modes)
      os << " [" << m.span.lo << ".." << m.span.hi << " " << kind_name(m.kind)
         << "]";
    os << "\n";
  }
  for (const auto& [port, elems] : n.fan_in)
    for (const auto& e : elems) os << "  wire " << port << " -> " << e << "\n";
  for (const auto& [elem, ports] : n.fan_out)
    for (const auto& p : ports) os << "  wire " << elem << " -> " << p << "\n";
  os << "end component\n";
  return os.str();
}

/// Human-readable run report: the architecture summary plus the assignment
/// and merge traces.
inline std::string write_report(const ConstraintSet& cs, const CompatGraph& g,
                                const AssignResult& assign_result,
                                const MergeResult& merge_result,
                                const Netlist& netlist) {
  ReportStats s = report_stats(netlist);
  std::ostringstream os;
  os << "STAR synthesis report\n";
  os << "=====================\n";
  os << "data: " << cs.data.size() << "\n";
  os << "ports: " << cs.ports.size() << "\n";
  os << "graph edges: " << g.edges.size() << "\n";
  os << "structures:\n";
  os << "  fifo: " << s.fifo << "\n";
  os << "  lifo: " << s.lifo << "\n";
  os << "  register: " << s.registers << "\n";
  os << "  multi: " << s.multi << "\n";
  os << "  total: " << s.total() << "\n";
  os << "largest fifo: " << detail::opt_depth(s.fifo_max) << "\n";
  os << "smallest fifo: " << detail::opt_depth(s.fifo_min) << "\n";
  os << "largest lifo: " << detail::opt_depth(s.lifo_max) << "\n";
  os << "smallest lifo: " << detail::opt_depth(s.lifo_min) << "\n";
  os << "total cells: " << s.total_cells << "\n";

  os << "assignment:\n";
  for (const auto& step : assign_result.trace) {
    os << "  " << step.iteration << ": " << kind_name(step.node.kind)
       << " depth=" << step.node.depth << " members=[";
    for (std::size_t i = 0; i < step.node.members.size(); ++i)
      os << (i ? "," : "") << step.node.members[i];
    os << "] score=" << std::fixed << std::setprecision(4) << step.node_score
       << "\n";
    os.unsetf(std::ios::fixed);
  }
  os << "  registers: " << assign_result.leftovers.size() << "\n";

  os << "merges:\n";
  for (const auto& step : merge_result.trace)
    os << "  " << step.into << " + " << step.from << ": cells "
       << step.cells_before << " -> " << step.cells_after << "\n";
  if (merge_result.trace.empty()) os << "  none\n";
  return os.str();
}

} // namespace star
