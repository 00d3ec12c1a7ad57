// Acceptance suite: one self-contained check per criterion, one PASS/FAIL
// line each. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "star/star.hpp"
#include "support.hpp"

#ifndef STAR_CLI_PATH
#define STAR_CLI_PATH ""
#endif

using namespace star;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Checker {
  std::vector<std::string> failures;
  std::string summary;

  void expect(bool ok, const std::string& message) {
    if (!ok && failures.size() < 16) failures.push_back(message);
    if (!ok && failures.size() == 16) failures.push_back("...");
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

TimedDatum raw_datum(std::string id, std::string port, Cycle w,
                     std::vector<Cycle> reads) {
  TimedDatum d{std::move(id), std::move(port), w, {}};
  for (Cycle r : reads) d.reads.push_back({"out", r});
  return d;
}

// ---------------------------------------------------------------- criterion 1

void criterion_sma_conformance(Checker& c) {
  std::mt19937_64 rng(101);
  const int trials = 10000;
  auto start = Clock::now();
  int labels[4] = {0, 0, 0, 0};

  for (int i = 0; i < trials; ++i) {
    bool tie = rng() % 8 == 0;
    Cycle wa = static_cast<Cycle>(rng() % 40);
    Cycle ra = wa + 1 + static_cast<Cycle>(rng() % 25);
    Cycle wb = tie ? wa : static_cast<Cycle>(rng() % 40);
    Cycle rb = wb + 1 + static_cast<Cycle>(rng() % 25);
    TimedDatum a = raw_datum("a", tie ? "in0" : "in", wa, {ra});
    TimedDatum b = raw_datum("b", tie ? "in1" : "in", wb, {rb});
    if (!chronological_less(a, b)) std::swap(a, b);

    auto label = classify_pair(a, b);

    // the temporal conditions, restated verbatim and independently
    bool reg_cond = b.tau_min() >= a.tau_max();
    bool fifo_cond = b.tau_min() > a.tau_min() && b.tau_first() > a.tau_max() &&
                     b.tau_min() < a.tau_max();
    bool lifo_cond = a.tau_min() < b.tau_min() && a.tau_first() > b.tau_max();

    c.expect(reg_cond + fifo_cond + lifo_cond <= 1,
             "rule predicates overlap for pair [" + std::to_string(a.tau_min()) +
                 "," + std::to_string(a.tau_max()) + "] / [" +
                 std::to_string(b.tau_min()) + "," + std::to_string(b.tau_max()) +
                 "]");
    bool ok;
    if (!label)
      ok = !reg_cond && !fifo_cond && !lifo_cond;
    else if (*label == StorageKind::Register)
      ok = reg_cond;
    else if (*label == StorageKind::Fifo)
      ok = fifo_cond;
    else
      ok = lifo_cond;
    c.expect(ok, "label does not satisfy its own predicate for pair [" +
                     std::to_string(a.tau_min()) + "," +
                     std::to_string(a.tau_max()) + "] / [" +
                     std::to_string(b.tau_min()) + "," +
                     std::to_string(b.tau_max()) + "]");
    ++labels[label ? static_cast<int>(*label) + 1 : 0];
  }
  double secs = seconds_since(start);
  c.expect(secs < 5.0, "runtime " + std::to_string(secs) + " s exceeds 5 s");
  for (int k = 0; k < 4; ++k)
    c.expect(labels[k] > 0, "label class " + std::to_string(k) + " never produced");
  std::ostringstream os;
  os << trials << " pairs (inc/R/F/L = " << labels[0] << "/" << labels[1] << "/"
     << labels[2] << "/" << labels[3] << "), " << c.failures.size()
     << " failures";
  c.summary = os.str();
}

// ---------------------------------------------------------------- criterion 2

void criterion_transitivity(Checker& c) {
  std::mt19937_64 rng(202);
  const int trials = 10000;

  auto fifo_successor = [&](const TimedDatum& x, int tag) {
    // wy strictly inside (wx, rx), ry beyond rx
    Cycle span = x.tau_max() - x.tau_min();
    Cycle wy = x.tau_min() + 1 + static_cast<Cycle>(rng() % (span - 1));
    Cycle ry = x.tau_max() + 1 + static_cast<Cycle>(rng() % 10);
    return raw_datum("f" + std::to_string(tag), "in", wy, {ry});
  };

  for (int i = 0; i < trials; ++i) {
    Cycle wa = static_cast<Cycle>(rng() % 20);
    TimedDatum a = raw_datum("a", "in", wa, {wa + 2 + static_cast<Cycle>(rng() % 20)});
    TimedDatum b = fifo_successor(a, 1);
    TimedDatum cc = fifo_successor(b, 2);
    c.expect(classify_pair(a, b) == StorageKind::Fifo, "constructed F(a,b) broke");
    c.expect(classify_pair(b, cc) == StorageKind::Fifo, "constructed F(b,c) broke");
    auto induced = classify_pair(a, cc);
    c.expect(induced == StorageKind::Fifo || induced == StorageKind::Register,
             "F o F induced neither FIFO nor Register at trial " +
                 std::to_string(i));
  }

  for (int i = 0; i < trials; ++i) {
    Cycle wa = static_cast<Cycle>(rng() % 10);
    Cycle ra = wa + 12 + static_cast<Cycle>(rng() % 20);
    TimedDatum a = raw_datum("a", "in", wa, {ra});
    // b strictly nested in a, with room for c inside b
    Cycle wb = wa + 1 + static_cast<Cycle>(rng() % 4);
    Cycle rb = wb + 4 + static_cast<Cycle>(rng() % (ra - wb - 4));
    TimedDatum b = raw_datum("b", "in", wb, {rb});
    Cycle wc = wb + 1 + static_cast<Cycle>(rng() % 2);
    Cycle rc = wc + 1 + static_cast<Cycle>(rng() % (rb - wc - 1));
    TimedDatum cc = raw_datum("c", "in", wc, {rc});

    c.expect(classify_pair(a, b) == StorageKind::Lifo, "constructed L(a,b) broke");
    c.expect(classify_pair(b, cc) == StorageKind::Lifo, "constructed L(b,c) broke");
    c.expect(classify_pair(a, cc) == StorageKind::Lifo,
             "L o L induced a non-LIFO label at trial " + std::to_string(i));
  }
  c.summary = std::to_string(trials) + " FIFO chains + " +
              std::to_string(trials) + " LIFO chains, " +
              std::to_string(c.failures.size()) + " failures";
}

// ---------------------------------------------------------------- criterion 3

void criterion_depth_equivalence(Checker& c) {
  std::mt19937_64 rng(303);
  const int instances = 1000;
  std::size_t fifo_paths = 0, lifo_paths = 0;
  for (int i = 0; i < instances; ++i) {
    ConstraintSet cs = support::random_constraint_set(rng, 64);
    CompatGraph g = build_graph(cs);
    for (auto label : {StorageKind::Fifo, StorageKind::Lifo}) {
      for (const auto& p : longest_paths(g, label)) {
        std::vector<Interval> ivs;
        for (std::size_t v : p.nodes) ivs.push_back(lifetime(g.nodes[v]));
        std::size_t depth =
            label == StorageKind::Fifo ? fifo_depth(g, p) : lifo_depth(p);
        c.expect(depth == occupancy_oracle(ivs),
                 "depth formula diverges from occupancy oracle (instance " +
                     std::to_string(i) + ")");
        ++(label == StorageKind::Fifo ? fifo_paths : lifo_paths);
      }
    }
  }
  c.summary = std::to_string(instances) + " instances, " +
              std::to_string(fifo_paths) + " F-paths + " +
              std::to_string(lifo_paths) + " L-paths checked, " +
              std::to_string(c.failures.size()) + " failures";
  c.expect(fifo_paths > 1000 && lifo_paths > 1000,
           "generator produced too few paths to be meaningful");
}

// ---------------------------------------------------------------- criterion 4

void criterion_graph_bound(Checker& c) {
  std::mt19937_64 rng(404);
  for (int i = 0; i < 300; ++i) {
    ConstraintSet cs = support::random_constraint_set(rng, 48);
    CompatGraph g = build_graph(cs);
    std::size_t n = g.size();
    c.expect(g.edges.size() <= n * (n - 1) / 2, "edge bound exceeded");
  }

  // with no incompatible pair the bound is reached exactly: a fully
  // buffered frame keeps every pair of lifetimes overlapping
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{2, 3},
                            {3, 4}, {5, 6}}) {
    std::size_t n = rows * cols;
    InterleaverSpec spec{n, block_permutation(rows, cols), 1,
                         static_cast<Cycle>(n), 1};
    CompatGraph g = build_graph(generate(spec));
    c.expect(g.edges.size() == n * (n - 1) / 2,
             "fully compatible instance should reach n(n-1)/2 edges");
  }
  c.summary = "300 random instances bounded, 3 full-overlap instances reach "
              "n(n-1)/2 exactly; " +
              std::to_string(c.failures.size()) + " failures";
}

// ---------------------------------------------------------------- criterion 5

int run_cli(const std::string& args) {
  std::string cmd = std::string(STAR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_end_to_end(Checker& c) {
  std::mt19937_64 rng(505);
  const int trials = 500;
  auto start = Clock::now();
  std::size_t total_data = 0;
  for (int i = 0; i < trials; ++i) {
    ConstraintSet cs = support::random_constraint_set(rng, 200);
    total_data += cs.data.size();
    FlowResult flow = run_flow(cs);
    SimTrace trace = simulate(flow.netlist, cs);
    c.expect(trace.passed, "replay failed on instance " + std::to_string(i) +
                               ": " + trace.failure);
  }
  double secs = seconds_since(start);
  c.expect(secs < 60.0, "runtime " + std::to_string(secs) + " s exceeds 60 s");

  // spot-check the CLI `check` subcommand end to end
  fs::path dir = fs::temp_directory_path() / "star_acceptance";
  fs::create_directories(dir);
  for (int i = 0; i < 5; ++i) {
    ConstraintSet cs = support::random_constraint_set(rng, 60);
    fs::path file = dir / ("c5_" + std::to_string(i) + ".json");
    std::ofstream(file) << serialize(cs);
    int rc = run_cli("check --constraints " + file.string());
    c.expect(rc == 0, "CLI check exited " + std::to_string(rc) + " on " +
                          file.string());
  }
  std::ostringstream os;
  os << trials << " random sets (" << total_data
     << " data total) replayed in-process + 5 via the CLI, "
     << c.failures.size() << " failures, " << std::fixed
     << std::setprecision(1) << secs << " s";
  c.summary = os.str();
}

// ---------------------------------------------------------------- criterion 6

void criterion_reference_instance(Checker& c) {
  ConstraintSet cs = support::six_datum_set();
  FlowResult flow = run_flow(cs);
  ReportStats stats = report_stats(flow.netlist);

  c.expect(stats.total_cells <= 5,
           "six data need " + std::to_string(stats.total_cells) +
               " cells, more than the 5 allowed");

  bool sharing_fifo = false;
  for (const auto& e : flow.netlist.elements) {
    std::size_t bound = 0;
    for (const auto& [datum, elem] : flow.netlist.binding) bound += elem == e.id;
    bool is_fifo = !e.modes.empty() && e.modes.front().kind == StorageKind::Fifo;
    if (is_fifo && bound > e.depth) sharing_fifo = true;
  }
  c.expect(sharing_fifo, "no FIFO holds more data than its depth");

  std::size_t greedy = total_cells(flow.merge.elements);
  std::size_t optimal = support::optimal_merge_cells(flow.assignment.all());
  c.expect(greedy <= optimal + 1,
           "greedy merge " + std::to_string(greedy) +
               " cells vs optimal " + std::to_string(optimal));

  SimTrace trace = simulate(flow.netlist, cs);
  c.expect(trace.passed, "reference netlist failed replay: " + trace.failure);

  std::ostringstream os;
  os << "cells=" << stats.total_cells << " (<=5), FIFO shares "
     << "data beyond depth, greedy/optimal merge = " << greedy << "/"
     << optimal;
  c.summary = os.str();
}

// ---------------------------------------------------------------- criterion 7

void criterion_interleaver_scaling(Checker& c) {
  struct Shape {
    std::size_t n, rows, cols;
  };
  const Shape shapes[] = {{300, 15, 20}, {600, 20, 30}, {1200, 30, 40}};
  std::ostringstream os;

  for (const auto& shape : shapes) {
    auto pi = block_permutation(shape.rows, shape.cols);

    // zero-slack: the frame is fully written before the first read, so
    // every datum is resident at once and no cell can be shared away
    auto start = Clock::now();
    InterleaverSpec zs{shape.n, pi, 1, static_cast<Cycle>(shape.n), 1};
    ConstraintSet cs = generate(zs);
    FlowResult flow = run_flow(cs);
    SimTrace trace = simulate(flow.netlist, cs);
    double secs = seconds_since(start);

    ReportStats stats = report_stats(flow.netlist);
    c.expect(trace.passed, "zero-slack n=" + std::to_string(shape.n) +
                               " failed replay: " + trace.failure);
    c.expect(stats.total_cells == shape.n,
             "zero-slack n=" + std::to_string(shape.n) + " used " +
                 std::to_string(stats.total_cells) + " cells, expected n");
    c.expect(stats.total() * 4 <= shape.n,
             "structure count " + std::to_string(stats.total()) +
                 " is not well below n=" + std::to_string(shape.n));
    std::string report = flow.report(cs);
    for (const char* column :
         {"fifo:", "lifo:", "register:", "total:", "largest fifo:",
          "smallest fifo:", "largest lifo:", "smallest lifo:", "total cells:"})
      c.expect(report.find(column) != std::string::npos,
               std::string("report misses column '") + column + "'");
    if (shape.n == 1200)
      c.expect(secs < 300.0, "n=1200 took " + std::to_string(secs) +
                                 " s, over the 300 s budget");

    // streaming companion run at the minimal feasible latency
    Cycle min_latency = 0;
    try {
      generate({shape.n, pi, 1, 1, 1});
      min_latency = 1;
    } catch (const InfeasibleError& e) {
      min_latency = e.min_latency();
    }
    auto start2 = Clock::now();
    ConstraintSet scs = generate({shape.n, pi, 1, min_latency, 1});
    FlowResult sflow = run_flow(scs);
    SimTrace strace = simulate(sflow.netlist, scs);
    double secs2 = seconds_since(start2);
    ReportStats sstats = report_stats(sflow.netlist);
    c.expect(strace.passed, "streaming n=" + std::to_string(shape.n) +
                                " failed replay: " + strace.failure);
    c.expect(sstats.total() * 4 <= shape.n,
             "streaming structure count " + std::to_string(sstats.total()) +
                 " is not well below n");
    c.expect(sstats.total_cells <= shape.n, "streaming used more than n cells");
    if (shape.n == 1200)
      c.expect(secs2 < 300.0, "streaming n=1200 took " +
                                  std::to_string(secs2) + " s");

    os << "n=" << shape.n << ": zero-slack " << stats.total() << " structures/"
       << stats.total_cells << " cells (" << std::fixed << std::setprecision(2)
       << secs << " s), streaming(lat=" << min_latency << ") "
       << sstats.total() << " structures/" << sstats.total_cells << " cells ("
       << secs2 << " s); ";
  }
  os << c.failures.size() << " failures";
  c.summary = os.str();
}

// ---------------------------------------------------------------- criterion 8

void criterion_mutation_robustness(Checker& c) {
  std::mt19937_64 rng(808);
  const int wanted = 100;
  int tested = 0, depth_mutants = 0, swap_mutants = 0;
  int guard = 0;

  while (tested < wanted && ++guard < 4000) {
    ConstraintSet cs = support::random_constraint_set(rng, 48);
    FlowResult flow = run_flow(cs);
    if (!simulate(flow.netlist, cs).passed) {
      c.expect(false, "baseline netlist failed before mutation");
      break;
    }

    for (std::size_t ei = 0; ei < flow.netlist.elements.size() && tested < wanted;
         ++ei) {
      const Element& e = flow.netlist.elements[ei];

      // depth mutant: a FIFO mode that dictates the element depth
      bool fifo_governs = false;
      for (const auto& m : e.modes)
        fifo_governs |= m.kind == StorageKind::Fifo && e.depth >= 2;
      if (fifo_governs && depth_mutants <= swap_mutants + 20) {
        Netlist mutant = flow.netlist;
        --mutant.elements[ei].depth;
        SimTrace t = simulate(mutant, cs);
        c.expect(!t.passed, "depth-1 FIFO mutant passed silently");
        c.expect(t.failure.find("overflow") != std::string::npos,
                 "depth mutant failed with '" + t.failure +
                     "', expected an overflow diagnostic");
        ++tested;
        ++depth_mutants;
        continue;
      }

      // swap mutant: run a LIFO mode with FIFO semantics
      for (std::size_t mi = 0; mi < e.modes.size(); ++mi) {
        if (e.modes[mi].kind != StorageKind::Lifo || tested >= wanted) continue;
        Netlist mutant = flow.netlist;
        mutant.elements[ei].modes[mi].kind = StorageKind::Fifo;
        SimTrace t = simulate(mutant, cs);
        c.expect(!t.passed, "LIFO-to-FIFO mutant passed silently");
        c.expect(t.failure.find("FIFO order violated") != std::string::npos,
                 "swap mutant failed with '" + t.failure +
                     "', expected a FIFO order diagnostic");
        ++tested;
        ++swap_mutants;
        break;
      }
    }
  }
  c.expect(tested == wanted, "only " + std::to_string(tested) +
                                 " applicable mutants found");
  c.summary = std::to_string(depth_mutants) + " depth mutants + " +
              std::to_string(swap_mutants) + " kind-swap mutants, " +
              std::to_string(c.failures.size()) + " failures";
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Checker&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "SMA rule conformance", criterion_sma_conformance},
      {2, "FIFO/LIFO transitivity", criterion_transitivity},
      {3, "depth formulas match the occupancy oracle", criterion_depth_equivalence},
      {4, "graph size bound", criterion_graph_bound},
      {5, "end-to-end soundness on random constraint sets", criterion_end_to_end},
      {6, "six-datum reference instance", criterion_reference_instance},
      {7, "interleaver scaling", criterion_interleaver_scaling},
      {8, "mutation robustness", criterion_mutation_robustness},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Checker checker;
    auto start = Clock::now();
    try {
      criterion.fn(checker);
    } catch (const std::exception& e) {
      checker.expect(false, std::string("unhandled exception: ") + e.what());
    }
    double secs = seconds_since(start);
    bool ok = checker.failures.empty();
    failed += !ok;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id
              << ": " << criterion.name << " — " << checker.summary << " ["
              << std::fixed << std::setprecision(2) << secs << " s]\n";
    for (const auto& f : checker.failures) std::cout << "       " << f << "\n";
  }
  std::cout << (failed == 0 ? "all criteria passed"
                            : std::to_string(failed) + " criteria failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}
