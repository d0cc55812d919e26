// Copyright 2026 The qalloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qalloc/alloc.hpp"
#include "qalloc/check_source.hpp"
#include "qalloc/check_target.hpp"
#include "qalloc/fuzz.hpp"
#include "qalloc/graph_algos.hpp"
#include "qalloc/parser.hpp"
#include "qalloc/printer.hpp"
#include "qalloc/sim.hpp"

namespace {

using json = nlohmann::json;
using namespace qalloc;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << content;
}

void report(const std::string& path, const Error& e) {
  std::cerr << path << ":" << e.span().line << ":" << e.span().column << ": "
            << error_kind_name(e.kind()) << ": " << e.what() << "\n";
}

std::size_t default_fuel() {
  if (const char* env = std::getenv("QALLOC_FUEL")) {
    return static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
  }
  return 10000;
}

json state_to_json(const DensityState& state) {
  json wires = json::array();
  for (const auto& l : state.labels) wires.push_back(l);
  json rows = json::array();
  for (Eigen::Index r = 0; r < state.rho.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < state.rho.cols(); ++c) {
      row.push_back({state.rho(r, c).real(), state.rho(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return json{{"wires", wires}, {"matrix", rows}};
}

json run_report_to_json(const RunReport& run, bool dump_states) {
  json branches = json::array();
  for (const auto& t : run.traces) {
    json b{{"path", t.path}, {"weight", t.weight}, {"returned", t.returned}};
    if (dump_states) b["state"] = state_to_json(t.state);
    branches.push_back(std::move(b));
  }
  json stuck = json::array();
  for (const auto& s : run.stuck) {
    stuck.push_back(
        {{"kind", error_kind_name(s.kind)}, {"path", s.path}, {"message", s.message}});
  }
  return json{{"schema_version", 1},
              {"branches", branches},
              {"stuck", stuck},
              {"fuel_exhausted", run.fuel_exhausted},
              {"steps", run.steps_used}};
}

void print_run_report(const RunReport& run) {
  for (const auto& t : run.traces) {
    std::cout << "branch '" << (t.path.empty() ? "-" : t.path) << "'  weight " << t.weight
              << "  returns (";
    for (std::size_t i = 0; i < t.returned.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << t.returned[i];
    }
    std::cout << ")\n";
  }
  for (const auto& s : run.stuck) {
    std::cout << "stuck '" << s.path << "': " << error_kind_name(s.kind) << ": " << s.message
              << "\n";
  }
  if (run.fuel_exhausted) std::cout << "fuel exhausted after " << run.steps_used << " steps\n";
}

json trace_to_json(const AllocTrace& trace) {
  json preamble = json::array();
  for (const auto& [var, node] : trace.preamble) preamble.push_back({var, node});
  json fns = json::object();
  for (const auto& [fn, nodes] : trace.fn_workspace_nodes) fns[fn] = nodes;
  json returns = json::array();
  for (const auto& r : trace.returns) {
    returns.push_back({{"owner", r.owner},
                       {"path", r.path},
                       {"source", r.source_vars},
                       {"target", r.target_vars}});
  }
  return json{{"schema_version", 1},
              {"preamble", preamble},
              {"function_workspaces", fns},
              {"returns", returns}};
}

int cmd_check_src(const std::string& path, int budget, bool has_budget,
                  const std::string& graph_path, bool explain_flag, bool hadamard) {
  try {
    SourceProgram program = parse_source(read_file(path), ParseOptions{hadamard});
    int n = 0;
    if (has_budget) {
      n = budget;
    } else if (!graph_path.empty()) {
      n = static_cast<int>(parse_coupling_graph(read_file(graph_path)).node_count());
    } else {
      n = minimal_entry_budget(program);
      std::cout << "minimal budget: " << n << "\n";
    }
    CheckedProgram checked = check_program(program, n);
    if (explain_flag) std::cout << explain(checked.derivation);
    std::cout << "ok: well typed at budget " << n << "\n";
    return kExitOk;
  } catch (const Error& e) {
    report(path, e);
    return kExitFailure;
  }
}

int cmd_check_tgt(const std::string& path, const std::string& graph_path, bool explain_flag,
                  bool hadamard) {
  try {
    TargetProgram program = parse_target(read_file(path), ParseOptions{hadamard});
    CouplingGraph graph = parse_coupling_graph(read_file(graph_path));
    TgtCheckResult result = check_program_tgt(program, graph);
    if (explain_flag) {
      for (const auto& d : result.derivations) std::cout << explain(d);
    }
    for (const auto& d : result.diagnostics) {
      std::cerr << path << ":" << d.span.line << ":" << d.span.column << ": "
                << error_kind_name(d.kind) << ": " << d.message << "\n";
    }
    if (!result.ok()) return kExitFailure;
    std::cout << "ok: satisfies the connectivity constraints\n";
    return kExitOk;
  } catch (const Error& e) {
    report(path, e);
    return kExitFailure;
  }
}

int cmd_alloc(const std::string& path, const std::string& graph_path,
              const std::string& out_path, const std::string& trace_path, bool hadamard) {
  try {
    SourceProgram program = parse_source(read_file(path), ParseOptions{hadamard});
    CouplingGraph graph = parse_coupling_graph(read_file(graph_path));
    CheckedProgram checked = check_program(program, static_cast<int>(graph.node_count()));
    AllocResult result = qubit_alloc(checked, graph);
    std::string text = print_target(result.program);
    if (out_path.empty() || out_path == "-") {
      std::cout << text;
    } else {
      write_file(out_path, text);
    }
    if (!trace_path.empty()) {
      write_file(trace_path, trace_to_json(result.trace).dump(2) + "\n");
    }
    return kExitOk;
  } catch (const Error& e) {
    report(path, e);
    return kExitFailure;
  }
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(),
                                                suffix) == 0;
}

int cmd_simulate(const std::string& path, const std::string& graph_path, std::size_t fuel,
                 int wires, bool as_json, bool dump_states, bool hadamard) {
  try {
    ParseOptions opts{hadamard};
    RunReport run;
    if (has_suffix(path, ".qtgt")) {
      if (graph_path.empty()) {
        std::cerr << "simulate: target programs need --graph\n";
        return kExitUsage;
      }
      TargetProgram program = parse_target(read_file(path), opts);
      CouplingGraph graph = parse_coupling_graph(read_file(graph_path));
      run = run_target(program, graph, fuel);
    } else {
      SourceProgram program = parse_source(read_file(path), opts);
      std::size_t n = wires > 0 ? static_cast<std::size_t>(wires)
                                : static_cast<std::size_t>(minimal_entry_budget(program));
      run = run_source(program, n, fuel);
    }
    if (as_json) {
      std::cout << run_report_to_json(run, dump_states).dump(2) << "\n";
    } else {
      print_run_report(run);
    }
    return run.stuck.empty() ? kExitOk : kExitFailure;
  } catch (const Error& e) {
    report(path, e);
    return kExitFailure;
  }
}

int cmd_verify(const std::string& path, const std::string& graph_path, std::size_t fuel,
               bool as_json, bool hadamard) {
  try {
    SourceProgram program = parse_source(read_file(path), ParseOptions{hadamard});
    CouplingGraph graph = parse_coupling_graph(read_file(graph_path));
    CheckedProgram checked = check_program(program, static_cast<int>(graph.node_count()));
    AllocResult result = qubit_alloc(checked, graph);
    TgtCheckResult recheck = check_program_tgt(result.program, graph);
    PreservationReport preservation =
        check_semantic_preservation(program, result.program, graph, fuel);
    bool ok = recheck.ok() && preservation.ok();
    if (as_json) {
      json branches = json::array();
      for (const auto& b : preservation.branches) {
        branches.push_back({{"path", b.path},
                            {"source_weight", b.source_weight},
                            {"target_weight", b.target_weight},
                            {"weights_match", b.weights_match},
                            {"isomorphic", b.isomorphic},
                            {"needed_fallback_permutation", b.needed_fallback_permutation}});
      }
      json out{{"schema_version", 1},
               {"type_checks", recheck.ok()},
               {"semantics_preserved", preservation.ok()},
               {"branches", branches},
               {"problems", preservation.problems}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "target type check: " << (recheck.ok() ? "ok" : "FAILED") << "\n";
      for (const auto& b : preservation.branches) {
        std::cout << "branch '" << (b.path.empty() ? "-" : b.path) << "': weight "
                  << b.source_weight << " vs " << b.target_weight << ", "
                  << (b.isomorphic ? "isomorphic" : "NOT ISOMORPHIC")
                  << (b.needed_fallback_permutation ? " (via fallback permutation)" : "")
                  << "\n";
      }
      for (const auto& p : preservation.problems) std::cout << "problem: " << p << "\n";
      std::cout << (ok ? "ok: semantics preserved\n" : "verification FAILED\n");
    }
    return ok ? kExitOk : kExitFailure;
  } catch (const Error& e) {
    report(path, e);
    return kExitFailure;
  }
}

int cmd_fuzz(const FuzzConfig& cfg, bool semantic, std::size_t fuel, bool as_json) {
  Rng rng(cfg.seed);
  int failures = 0;
  json cases = json::array();
  std::ostringstream text;
  for (int i = 0; i < cfg.count; ++i) {
    GeneratedCase gen = generate_case(rng, cfg);
    FuzzCaseOutcome outcome = evaluate_case(gen, semantic, fuel);
    bool ok = outcome.hard_ok() && outcome.type_preservation && outcome.source_soundness &&
              outcome.mutation_rejected &&
              (!outcome.semantics_checked || outcome.semantics_preserved);
    if (!ok) ++failures;
    if (as_json) {
      cases.push_back({{"index", i},
                       {"ok", ok},
                       {"minimal_budget", outcome.minimal_budget},
                       {"type_preservation", outcome.type_preservation},
                       {"source_soundness", outcome.source_soundness},
                       {"mutation_rejected", outcome.mutation_rejected},
                       {"semantics_checked", outcome.semantics_checked},
                       {"semantics_preserved", outcome.semantics_preserved},
                       {"error", outcome.error}});
    } else {
      text << "case " << i << ": " << (ok ? "ok" : "FAILED");
      if (!outcome.error.empty()) text << " (" << outcome.error << ")";
      text << "\n";
    }
  }
  if (as_json) {
    json out{{"schema_version", 1},
             {"seed", cfg.seed},
             {"count", cfg.count},
             {"failures", failures},
             {"cases", cases}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << text.str();
    std::cout << "fuzz: " << (cfg.count - failures) << "/" << cfg.count << " cases passed\n";
  }
  return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_graph(const std::string& path, bool dot, int chain_size) {
  try {
    CouplingGraph graph = parse_coupling_graph(read_file(path));
    if (chain_size > 0) {
      SubgraphChain chain = construct_subgraphs(graph);
      if (static_cast<std::size_t>(chain_size) > chain.size()) {
        std::cerr << "graph: chain has only " << chain.size() << " elements\n";
        return kExitFailure;
      }
      const CouplingGraph& g = chain.at_size(static_cast<std::size_t>(chain_size));
      std::cout << (dot ? to_dot(g, "chain") : print_coupling_graph(g));
      return kExitOk;
    }
    std::cout << (dot ? to_dot(graph) : print_coupling_graph(graph));
    return kExitOk;
  } catch (const Error& e) {
    report(path, e);
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qalloc: type-based qubit allocation, verification and simulation"};
  app.require_subcommand(1);

  std::string input, graph_path, out_path = "-", trace_path;
  bool explain_flag = false, hadamard = false, as_json = false, dump_states = false;
  bool semantic = false, dot = false;
  int budget = -1, wires = 0, chain_size = 0;
  std::size_t fuel = default_fuel();

  auto* check_src = app.add_subcommand("check-src", "type check a source program");
  check_src->add_option("file", input)->required();
  auto* budget_opt = check_src->add_option("--budget", budget, "free-qubit budget N");
  check_src->add_option("--graph", graph_path, "use |V(G)| as the budget");
  check_src->add_flag("--explain", explain_flag, "dump the typing derivation");
  check_src->add_flag("--hadamard", hadamard, "enable the h gate extension");

  auto* check_tgt = app.add_subcommand("check-tgt", "check connectivity constraints");
  check_tgt->add_option("file", input)->required();
  check_tgt->add_option("--graph", graph_path)->required();
  check_tgt->add_flag("--explain", explain_flag);
  check_tgt->add_flag("--hadamard", hadamard);

  auto* alloc = app.add_subcommand("alloc", "translate a source program to the target");
  alloc->add_option("file", input)->required();
  alloc->add_option("--graph", graph_path)->required();
  alloc->add_option("-o,--output", out_path, "output path ('-' for stdout)");
  alloc->add_option("--emit-trace", trace_path, "write the correspondence trace as JSON");
  alloc->add_flag("--hadamard", hadamard);

  auto* simulate = app.add_subcommand("simulate", "run the density-matrix interpreter");
  simulate->add_option("file", input)->required();
  simulate->add_option("--graph", graph_path, "coupling graph (.qtgt inputs)");
  simulate->add_option("--fuel", fuel, "step budget");
  simulate->add_option("--wires", wires, "free wires for source programs");
  simulate->add_flag("--json", as_json);
  simulate->add_flag("--dump-states", dump_states, "include matrices in --json output");
  simulate->add_flag("--hadamard", hadamard);

  auto* verify = app.add_subcommand("verify", "alloc + re-check + semantic comparison");
  verify->add_option("file", input)->required();
  verify->add_option("--graph", graph_path)->required();
  verify->add_option("--fuel", fuel);
  verify->add_flag("--json", as_json);
  verify->add_flag("--hadamard", hadamard);

  FuzzConfig cfg;
  auto* fuzz = app.add_subcommand("fuzz", "seeded well-typed program fuzzing");
  fuzz->add_option("--seed", cfg.seed);
  fuzz->add_option("--count", cfg.count);
  fuzz->add_option("--max-qubits", cfg.max_qubits);
  fuzz->add_option("--max-depth", cfg.max_depth);
  fuzz->add_option("--max-funs", cfg.max_funs);
  fuzz->add_option("--graph-min", cfg.graph_min_nodes);
  fuzz->add_option("--graph-max", cfg.graph_max_nodes);
  fuzz->add_flag("--semantic", semantic, "also compare density semantics");
  fuzz->add_option("--fuel", fuel);
  fuzz->add_flag("--json", as_json);

  auto* graph_cmd = app.add_subcommand("graph", "inspect a coupling graph");
  graph_cmd->add_option("file", input)->required();
  graph_cmd->add_flag("--dot,--emit-dot", dot, "render as Graphviz DOT");
  graph_cmd->add_option("--chain", chain_size, "print the chain element of this size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check_src->parsed()) {
      return cmd_check_src(input, budget, budget_opt->count() > 0, graph_path, explain_flag,
                           hadamard);
    }
    if (check_tgt->parsed()) return cmd_check_tgt(input, graph_path, explain_flag, hadamard);
    if (alloc->parsed()) return cmd_alloc(input, graph_path, out_path, trace_path, hadamard);
    if (simulate->parsed()) {
      return cmd_simulate(input, graph_path, fuel, wires, as_json, dump_states, hadamard);
    }
    if (verify->parsed()) return cmd_verify(input, graph_path, fuel, as_json, hadamard);
    if (fuzz->parsed()) {
      // Recursive programs diverge; exhaustive semantic runs need termination.
      if (semantic) cfg.allow_recursion = false;
      return cmd_fuzz(cfg, semantic, fuel, as_json);
    }
    if (graph_cmd->parsed()) return cmd_graph(input, dot, chain_size);
  } catch (const std::exception& e) {
    std::cerr << "qalloc: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
