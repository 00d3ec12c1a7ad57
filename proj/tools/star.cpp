// star: interface buffer synthesis from I/O timing constraints.
//
// Exit codes: 0 success / simulation pass, 1 usage or I/O error,
// 2 invalid constraints, 3 simulation failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "star/star.hpp"

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw star::Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// temp-then-rename, so interrupted runs never leave partial files
void write_file_atomic(const std::string& path, const std::string& content) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp~";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw star::Error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw star::Error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

std::vector<std::size_t> load_permutation(const std::string& path, std::size_t n) {
  std::string text = read_file(path);
  std::vector<std::size_t> pi;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    auto j = nlohmann::json::parse(text);
    for (const auto& v : j) pi.push_back(v.get<std::size_t>());
  } else {
    std::istringstream is(text);
    std::size_t v;
    while (is >> v) pi.push_back(v);
  }
  if (pi.size() != n)
    throw star::Error("permutation file holds " + std::to_string(pi.size()) +
                      " entries, expected " + std::to_string(n));
  return pi;
}

std::vector<std::size_t> make_scheme(const std::string& scheme, std::size_t n) {
  if (scheme == "identity") {
    std::vector<std::size_t> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = i;
    return pi;
  }
  if (scheme.rfind("block:", 0) == 0) {
    std::string dims = scheme.substr(6);
    std::size_t x = dims.find('x');
    if (x == std::string::npos)
      throw star::Error("scheme block: expected block:ROWSxCOLS");
    std::size_t rows = std::stoull(dims.substr(0, x));
    std::size_t cols = std::stoull(dims.substr(x + 1));
    if (rows * cols != n)
      throw star::Error("block scheme " + dims + " does not cover n=" +
                        std::to_string(n));
    return star::block_permutation(rows, cols);
  }
  if (scheme.rfind("file:", 0) == 0) return load_permutation(scheme.substr(5), n);
  throw star::Error("unknown scheme '" + scheme +
                    "' (expected identity, block:RxC or file:PATH)");
}

struct BuildArtifacts {
  star::ConstraintSet cs;
  star::FlowResult flow;
};

BuildArtifacts run_build(const std::string& constraints_path,
                         const star::Weights& weights,
                         const std::string& out_path,
                         const std::string& report_path,
                         const std::string& dot_path,
                         const std::string& graph_json_path,
                         const std::string& hdl_path) {
  BuildArtifacts a;
  a.cs = star::parse_constraints(read_file(constraints_path));
  a.flow = star::run_flow(a.cs, weights);
  if (!out_path.empty())
    write_file_atomic(out_path, star::write_netlist(a.flow.netlist));
  if (!report_path.empty())
    write_file_atomic(report_path, a.flow.report(a.cs));
  if (!dot_path.empty())
    write_file_atomic(dot_path, star::export_dot(a.flow.graph));
  if (!graph_json_path.empty())
    write_file_atomic(graph_json_path, star::graph_json(a.flow.graph).dump(2) + "\n");
  if (!hdl_path.empty())
    write_file_atomic(hdl_path, star::write_pseudo_hdl(a.flow.netlist));
  return a;
}

int run_simulation(const star::Netlist& netlist, const star::ConstraintSet& cs,
                   const std::string& trace_path) {
  star::SimTrace trace = star::simulate(netlist, cs);
  if (!trace_path.empty()) write_file_atomic(trace_path, star::trace_jsonl(trace));
  if (!trace.passed) {
    std::cerr << "simulation failed at cycle " << trace.failure_time << ": "
              << trace.failure << "\n";
    return 3;
  }
  std::cout << "simulation pass: " << cs.data.size() << " data, "
            << trace.cells << " cells, peak occupancy " << trace.peak_total
            << "\n";
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"STAR: synthesizes an optimized FIFO/LIFO/register buffer "
               "architecture plus control schedule from I/O timing "
               "constraints"};
  app.require_subcommand(1);
  std::ostringstream version;
  version << "star " << star::version << " (constraint schema "
          << star::constraint_schema_version << ", netlist schema "
          << star::netlist_schema_version << ")";
  app.set_version_flag("--version", version.str());

  std::string constraints_path, netlist_path, out_path, report_path, dot_path;
  std::string graph_json_path, hdl_path, trace_path, weights_text, scheme = "identity";
  std::size_t gen_n = 0;
  star::Cycle in_period = 1, latency = 1, out_period = 1;

  auto* gen = app.add_subcommand("gen-interleaver",
                                 "Generate interleaver I/O constraints");
  gen->add_option("--n", gen_n, "block length")->required();
  gen->add_option("--scheme", scheme,
                  "permutation: identity, block:ROWSxCOLS or file:PATH");
  gen->add_option("--in-period", in_period, "cycles between writes");
  gen->add_option("--latency", latency, "first write to first read");
  gen->add_option("--out-period", out_period, "cycles between reads");
  gen->add_option("--out", out_path, "output constraint file")->required();

  auto* graph = app.add_subcommand("graph", "Export the compatibility graph");
  graph->add_option("--constraints", constraints_path, "constraint file")->required();
  graph->add_option("--dot", dot_path, "DOT output path")->required();
  graph->add_option("--json", graph_json_path, "graph JSON output path");

  auto add_build_opts = [&](CLI::App* cmd, bool out_required) {
    cmd->add_option("--constraints", constraints_path, "constraint file")->required();
    auto* out = cmd->add_option("--out", out_path, "netlist JSON output");
    if (out_required) out->required();
    cmd->add_option("--report", report_path, "synthesis report output");
    cmd->add_option("--dot", dot_path, "compatibility graph DOT output");
    cmd->add_option("--graph-json", graph_json_path, "graph JSON output");
    cmd->add_option("--hdl", hdl_path, "pseudo-HDL sketch output");
    cmd->add_option("--weights", weights_text,
                    "heuristic weights, e.g. depth=1,demux=0.5,util=1");
  };

  auto* build = app.add_subcommand("build", "Synthesize a netlist + schedule");
  add_build_opts(build, true);

  auto* check = app.add_subcommand(
      "check", "Synthesize, then verify the netlist by simulation");
  add_build_opts(check, false);
  check->add_option("--trace", trace_path, "cycle trace JSONL output");

  auto* sim = app.add_subcommand("simulate", "Replay a netlist against constraints");
  sim->add_option("--netlist", netlist_path, "netlist JSON file")->required();
  sim->add_option("--constraints", constraints_path, "constraint file")->required();
  sim->add_option("--trace", trace_path, "cycle trace JSONL output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    star::Weights weights =
        weights_text.empty() ? star::Weights{} : star::parse_weights(weights_text);

    if (gen->parsed()) {
      star::InterleaverSpec spec{gen_n, make_scheme(scheme, gen_n), in_period,
                                 latency, out_period};
      write_file_atomic(out_path, star::serialize(star::generate(spec)));
      std::cout << "wrote " << gen_n << " data to " << out_path << "\n";
      return 0;
    }
    if (graph->parsed()) {
      auto cs = star::parse_constraints(read_file(constraints_path));
      auto g = star::build_graph(cs);
      write_file_atomic(dot_path, star::export_dot(g));
      if (!graph_json_path.empty())
        write_file_atomic(graph_json_path, star::graph_json(g).dump(2) + "\n");
      std::cout << g.size() << " nodes, " << g.edges.size() << " edges\n";
      return 0;
    }
    if (build->parsed()) {
      auto a = run_build(constraints_path, weights, out_path, report_path,
                         dot_path, graph_json_path, hdl_path);
      auto stats = star::report_stats(a.flow.netlist);
      std::cout << "synthesized " << stats.total() << " elements, "
                << stats.total_cells << " cells for " << a.cs.data.size()
                << " data\n";
      return 0;
    }
    if (check->parsed()) {
      auto a = run_build(constraints_path, weights, out_path, report_path,
                         dot_path, graph_json_path, hdl_path);
      return run_simulation(a.flow.netlist, a.cs, trace_path);
    }
    if (sim->parsed()) {
      auto netlist = star::parse_netlist(read_file(netlist_path));
      auto cs = star::parse_constraints(read_file(constraints_path));
      return run_simulation(netlist, cs, trace_path);
    }
  } catch (const star::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const star::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const star::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const star::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

} // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
