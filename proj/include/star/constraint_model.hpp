#pragma once

// I/O constraint sets: ports, timed data items and their lifetimes.
// This is the entry point of the synthesis flow; everything downstream
// (compatibility graph, sizing, allocation) consumes a validated
// ConstraintSet.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace star {

using Cycle = std::int64_t;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

/// Closed cycle interval [lo, hi]: production to last consumption.
struct Interval {
  Cycle lo = 0;
  Cycle hi = 0;

  /// True if the two intervals share storage-relevant time. Intervals that
  /// only touch at a boundary (hi == other.lo) do not overlap: the outgoing
  /// datum leaves before the incoming one arrives on the same cycle.
  bool overlaps(const Interval& o) const { return lo < o.hi && o.lo < hi; }

  Cycle span() const { return hi - lo; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

enum class PortDir : std::uint8_t { Input, Output };

inline std::string_view dir_name(PortDir d) {
  return d == PortDir::Input ? "input" : "output";
}

struct Port {
  std::string name;
  PortDir dir = PortDir::Input;

  friend bool operator==(const Port&, const Port&) = default;
};

struct ReadEvent {
  std::string port;
  Cycle t = 0;

  friend bool operator==(const ReadEvent&, const ReadEvent&) = default;
  friend auto operator<=>(const ReadEvent& a, const ReadEvent& b) {
    return std::tie(a.t, a.port) <=> std::tie(b.t, b.port);
  }
};

/// One datum: produced once on an input port, consumed on output port(s).
/// Reads are kept sorted ascending by (time, port).
struct TimedDatum {
  std::string id;
  std::string write_port;
  Cycle write_time = 0;
  std::vector<ReadEvent> reads;

  Cycle tau_min() const { return write_time; }
  Cycle tau_first() const {
    if (reads.empty()) throw Error("datum '" + id + "' has no reads");
    return reads.front().t;
  }
  Cycle tau_max() const {
    if (reads.empty()) throw Error("datum '" + id + "' has no reads");
    return reads.back().t;
  }
  bool single_read() const { return reads.size() == 1; }

  friend bool operator==(const TimedDatum&, const TimedDatum&) = default;
};

/// Lifetime I(a) = [tau_min(a), tau_max(a)].
inline Interval lifetime(const TimedDatum& d) {
  return Interval{d.tau_min(), d.tau_max()};
}

/// Canonical chronological order: production time, then write port, then id.
/// Total for valid sets (ids unique), so downstream ordering is deterministic.
inline bool chronological_less(const TimedDatum& a, const TimedDatum& b) {
  return std::tie(a.write_time, a.write_port, a.id) <
         std::tie(b.write_time, b.write_port, b.id);
}

struct ConstraintSet {
  std::vector<Port> ports;      // sorted by name once canonicalized
  std::vector<TimedDatum> data; // sorted by (write_time, id)
  std::optional<int> word_width;

  const Port* find_port(std::string_view name) const {
    for (const auto& p : ports)
      if (p.name == name) return &p;
    return nullptr;
  }

  const TimedDatum* find_datum(std::string_view id) const {
    for (const auto& d : data)
      if (d.id == id) return &d;
    return nullptr;
  }

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

/// Sorts ports, data and per-datum reads into the canonical order the
/// serializer emits.
inline void canonicalize(ConstraintSet& cs) {
  std::sort(cs.ports.begin(), cs.ports.end(),
            [](const Port& a, const Port& b) { return a.name < b.name; });
  for (auto& d : cs.data) std::sort(d.reads.begin(), d.reads.end());
  std::sort(cs.data.begin(), cs.data.end(),
            [](const TimedDatum& a, const TimedDatum& b) {
              return std::tie(a.write_time, a.id) < std::tie(b.write_time, b.id);
            });
}

struct Violation {
  std::string code;    // e.g. "duplicate-id", "read-order", "port-collision"
  std::string subject; // offending datum or port
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(format(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

private:
  static std::string format(const std::vector<Violation>& vs) {
    std::ostringstream os;
    os << "invalid constraint set (" << vs.size() << " violation"
       << (vs.size() == 1 ? "" : "s") << "):";
    for (const auto& v : vs)
      os << "\n  [" << v.code << "] " << v.subject << ": " << v.detail;
    return os.str();
  }

  std::vector<Violation> violations_;
};

/// Checks every model invariant; returns the full violation list (empty when
/// the set is valid). Violations are data, not exceptions.
inline std::vector<Violation> validate(const ConstraintSet& cs) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string subject, std::string detail) {
    out.push_back({std::move(code), std::move(subject), std::move(detail)});
  };

  std::set<std::string_view> port_names;
  for (const auto& p : cs.ports) {
    if (!port_names.insert(p.name).second)
      add("duplicate-port", p.name, "port name appears more than once");
  }

  std::set<std::string_view> ids;
  // (port, cycle) usage for the point-to-point exclusivity checks
  std::set<std::pair<std::string_view, Cycle>> writes_seen, reads_seen;

  for (const auto& d : cs.data) {
    if (!ids.insert(d.id).second)
      add("duplicate-id", d.id, "datum id appears more than once");

    if (d.write_time < 0)
      add("negative-time", d.id, "write time is negative");

    const Port* wp = cs.find_port(d.write_port);
    if (!wp) {
      add("unknown-port", d.id, "write port '" + d.write_port + "' not declared");
    } else if (wp->dir != PortDir::Input) {
      add("direction", d.id, "write port '" + d.write_port + "' is not an input");
    }
    if (!writes_seen.insert({d.write_port, d.write_time}).second)
      add("port-collision", d.id,
          "second write on port '" + d.write_port + "' at cycle " +
              std::to_string(d.write_time));

    if (d.reads.empty()) {
      add("no-reads", d.id, "datum is never read");
      continue;
    }
    if (!std::is_sorted(d.reads.begin(), d.reads.end()))
      add("read-sort", d.id, "reads are not sorted by time");

    for (const auto& r : d.reads) {
      if (r.t < 0) add("negative-time", d.id, "read time is negative");
      if (r.t <= d.write_time)
        add("read-order", d.id,
            "read at cycle " + std::to_string(r.t) +
                " does not come after write at cycle " +
                std::to_string(d.write_time));
      const Port* rp = cs.find_port(r.port);
      if (!rp) {
        add("unknown-port", d.id, "read port '" + r.port + "' not declared");
      } else if (rp->dir != PortDir::Output) {
        add("direction", d.id, "read port '" + r.port + "' is not an output");
      }
      if (!reads_seen.insert({r.port, r.t}).second)
        add("port-collision", d.id,
            "second read on port '" + r.port + "' at cycle " +
                std::to_string(r.t));
    }
  }
  return out;
}

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j,
                                           const char* key,
                                           const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::string require_string(const nlohmann::json& j, const char* key,
                                  const std::string& where) {
  const auto& v = require_field(j, key, where);
  if (!v.is_string())
    throw ParseError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline Cycle require_cycle(const nlohmann::json& j, const char* key,
                           const std::string& where) {
  const auto& v = require_field(j, key, where);
  if (!v.is_number_integer())
    throw ParseError(where + "." + key + ": expected an integer");
  return v.get<Cycle>();
}

} // namespace detail

/// Parses the constraint-file JSON and returns a validated, canonicalized
/// ConstraintSet. Throws ParseError on malformed text (with position) and
/// ValidationError when the content breaks a model invariant.
inline ConstraintSet parse_constraints(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("constraint file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("constraint file: expected an object");

  ConstraintSet cs;
  const auto& ports = detail::require_field(j, "ports", "constraint file");
  if (!ports.is_array()) throw ParseError("ports: expected an array");
  std::size_t pi = 0;
  for (const auto& pj : ports) {
    std::string where = "ports[" + std::to_string(pi++) + "]";
    if (!pj.is_object()) throw ParseError(where + ": expected an object");
    Port p;
    p.name = detail::require_string(pj, "name", where);
    std::string dir = detail::require_string(pj, "dir", where);
    if (dir == "input")
      p.dir = PortDir::Input;
    else if (dir == "output")
      p.dir = PortDir::Output;
    else
      throw ParseError(where + ".dir: expected \"input\" or \"output\"");
    cs.ports.push_back(std::move(p));
  }

  const auto& data = detail::require_field(j, "data", "constraint file");
  if (!data.is_array()) throw ParseError("data: expected an array");
  std::size_t di = 0;
  for (const auto& dj : data) {
    std::string where = "data[" + std::to_string(di++) + "]";
    if (!dj.is_object()) throw ParseError(where + ": expected an object");
    TimedDatum d;
    d.id = detail::require_string(dj, "id", where);
    const auto& wj = detail::require_field(dj, "write", where);
    if (!wj.is_object()) throw ParseError(where + ".write: expected an object");
    d.write_port = detail::require_string(wj, "port", where + ".write");
    d.write_time = detail::require_cycle(wj, "t", where + ".write");
    const auto& rj = detail::require_field(dj, "reads", where);
    if (!rj.is_array()) throw ParseError(where + ".reads: expected an array");
    std::size_t ri = 0;
    for (const auto& r : rj) {
      std::string rwhere = where + ".reads[" + std::to_string(ri++) + "]";
      if (!r.is_object()) throw ParseError(rwhere + ": expected an object");
      d.reads.push_back({detail::require_string(r, "port", rwhere),
                         detail::require_cycle(r, "t", rwhere)});
    }
    cs.data.push_back(std::move(d));
  }

  if (auto it = j.find("width"); it != j.end()) {
    if (!it->is_number_integer() || it->get<int>() < 1)
      throw ParseError("width: expected a positive integer");
    cs.word_width = it->get<int>();
  }

  canonicalize(cs);
  if (auto violations = validate(cs); !violations.empty())
    throw ValidationError(std::move(violations));
  return cs;
}

/// Canonical serializer: sorted object keys, ports sorted by name, data
/// sorted by (write time, id). parse(serialize(cs)) == cs for every valid
/// canonical set.
inline std::string serialize(const ConstraintSet& cs) {
  ConstraintSet canon = cs;
  canonicalize(canon);

  nlohmann::json j;
  j["ports"] = nlohmann::json::array();
  for (const auto& p : canon.ports)
    j["ports"].push_back({{"name", p.name}, {"dir", std::string(dir_name(p.dir))}});
  j["data"] = nlohmann::json::array();
  for (const auto& d : canon.data) {
    nlohmann::json dj;
    dj["id"] = d.id;
    dj["write"] = {{"port", d.write_port}, {"t", d.write_time}};
    dj["reads"] = nlohmann::json::array();
    for (const auto& r : d.reads)
      dj["reads"].push_back({{"port", r.port}, {"t", r.t}});
    j["data"].push_back(std::move(dj));
  }
  if (canon.word_width) j["width"] = *canon.word_width;
  return j.dump(2) + "\n";
}

} // namespace star
