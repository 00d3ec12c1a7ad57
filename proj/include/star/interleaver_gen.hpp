#pragma once

// Constraint-set generation for interleaver workloads: a block of n data
// written periodically on one port and read back permuted on another, after
// a configurable latency.

#include <cstddef>
#include <string>
#include <vector>

#include "star/constraint_model.hpp"

namespace star {

class InfeasibleError : public Error {
public:
  InfeasibleError(const std::string& message, Cycle min_latency)
      : Error(message), min_latency_(min_latency) {}

  Cycle min_latency() const { return min_latency_; }

private:
  Cycle min_latency_;
};

struct InterleaverSpec {
  std::size_t n = 0;
  std::vector<std::size_t> permutation; // output slot k emits datum permutation[k]
  Cycle input_period = 1;
  Cycle latency = 1; // first write to first read
  Cycle output_period = 1;
};

/// Row-write/column-read block interleaver: data fill an rows x cols matrix
/// by rows and leave by columns, so pi(i) = (i mod rows)*cols + (i div rows).
inline std::vector<std::size_t> block_permutation(std::size_t rows,
                                                  std::size_t cols) {
  if (rows < 1 || cols < 1) throw Error("block_permutation: rows and cols must be >= 1");
  std::vector<std::size_t> pi(rows * cols);
  for (std::size_t i = 0; i < pi.size(); ++i)
    pi[i] = (i % rows) * cols + i / rows;
  return pi;
}

inline void check_bijection(const std::vector<std::size_t>& pi) {
  std::vector<char> seen(pi.size(), 0);
  for (std::size_t v : pi) {
    if (v >= pi.size() || seen[v])
      throw Error("permutation is not a bijection on [0, " +
                  std::to_string(pi.size()) + ")");
    seen[v] = 1;
  }
}

/// Generates the constraint set: datum i is written at i*input_period and
/// read at latency + rank(i)*output_period, where rank(i) is i's position
/// in the permuted output sequence. Throws InfeasibleError (reporting the
/// minimal feasible latency) when some read would not come after its write.
inline ConstraintSet generate(const InterleaverSpec& spec) {
  if (spec.n == 0) throw Error("interleaver: n must be >= 1");
  if (spec.permutation.size() != spec.n)
    throw Error("interleaver: permutation size differs from n");
  check_bijection(spec.permutation);
  if (spec.input_period < 1 || spec.output_period < 1)
    throw Error("interleaver: periods must be >= 1");

  // rank(i) = position of datum i in the output sequence
  std::vector<std::size_t> rank(spec.n);
  for (std::size_t k = 0; k < spec.n; ++k) rank[spec.permutation[k]] = k;

  Cycle min_latency = 1;
  for (std::size_t i = 0; i < spec.n; ++i) {
    Cycle slack_free = static_cast<Cycle>(i) * spec.input_period -
                       static_cast<Cycle>(rank[i]) * spec.output_period;
    min_latency = std::max(min_latency, slack_free + 1);
  }
  if (spec.latency < min_latency)
    throw InfeasibleError("interleaver spec infeasible: latency " +
                              std::to_string(spec.latency) +
                              " makes some read precede its write; minimal "
                              "feasible latency is " +
                              std::to_string(min_latency),
                          min_latency);

  int width = 1;
  for (std::size_t v = spec.n - 1; v >= 10; v /= 10) ++width;

  ConstraintSet cs;
  cs.ports = {{"in", PortDir::Input}, {"out", PortDir::Output}};
  cs.word_width = 1;
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::string id = std::to_string(i);
    id = "d" + std::string(width - std::min<std::size_t>(width, id.size()), '0') + id;
    TimedDatum d;
    d.id = std::move(id);
    d.write_port = "in";
    d.write_time = static_cast<Cycle>(i) * spec.input_period;
    d.reads = {{"out", spec.latency +
                           static_cast<Cycle>(rank[i]) * spec.output_period}};
    cs.data.push_back(std::move(d));
  }
  canonicalize(cs);
  if (auto violations = validate(cs); !violations.empty())
    throw ValidationError(std::move(violations));
  return cs;
}

} // namespace star
