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

#include <doctest.h>

#include "helpers.hpp"
#include "qalloc/alloc.hpp"
#include "qalloc/check_source.hpp"
#include "qalloc/check_target.hpp"
#include "qalloc/fuzz.hpp"
#include "qalloc/parser.hpp"
#include "qalloc/sim.hpp"
#include "qalloc/subst.hpp"

using namespace qalloc;

namespace {

DensityState basis_state(std::vector<VarName> labels, unsigned index) {
  DensityState s = DensityState::zeros(std::move(labels));
  s.rho.setZero();
  s.rho(index, index) = 1.0;
  return s;
}

}  // namespace

TEST_CASE("CNOT and SWAP square to the identity") {
  Rng rng(61);
  DensityState s = DensityState::zeros({"x", "y", "z"});
  // Scramble into a generic mixed state via a few gates and measurements.
  apply_h(s, "x");
  apply_cnot(s, "x", "y");
  apply_h(s, "z");
  Eigen::MatrixXcd before = s.rho;
  apply_cnot(s, "y", "z");
  apply_cnot(s, "y", "z");
  CHECK((s.rho - before).cwiseAbs().maxCoeff() <= 1e-12);
  apply_swap(s, "x", "z");
  apply_swap(s, "x", "z");
  CHECK((s.rho - before).cwiseAbs().maxCoeff() <= 1e-12);
  (void)rng;
}

TEST_CASE("cnot maps |10> to |11>") {
  DensityState s = basis_state({"c", "t"}, 0b10);
  apply_cnot(s, "c", "t");
  DensityState expected = basis_state({"c", "t"}, 0b11);
  CHECK((s.rho - expected.rho).norm() <= 1e-12);
}

TEST_CASE("swap on |10> over an edge yields |01>") {
  DensityState s = basis_state({"a", "b"}, 0b10);
  apply_swap(s, "a", "b");
  CHECK((s.rho - basis_state({"a", "b"}, 0b01).rho).norm() <= 1e-12);
}

TEST_CASE("reset is trace preserving and lands in |0>") {
  DensityState s = basis_state({"w"}, 1);
  apply_reset(s, "w");
  CHECK(s.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(s.rho(0, 0) - std::complex<double>(1.0)) <= 1e-12);
}

TEST_CASE("measurement branches split the trace") {
  DensityState s = DensityState::zeros({"w"});
  apply_h(s, "w");  // (|0>+|1>)/sqrt2: each outcome has weight 1/2
  DensityState yes = s, no = s;
  apply_measurement(yes, "w", true);
  apply_measurement(no, "w", false);
  CHECK(yes.trace_real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(no.trace_real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(yes.trace_real() + no.trace_real() ==
        doctest::Approx(s.trace_real()).epsilon(1e-12));
}

TEST_CASE("density isomorphism ignores labels and wire order") {
  DensityState a = basis_state({"x1", "x2"}, 0b01);
  DensityState b = basis_state({"x2", "x1"}, 0b10);
  DensityState c = basis_state({"y1", "y2"}, 0b10);
  CHECK(density_isomorphic(a, b));
  CHECK(density_isomorphic(a, c));
  CHECK_FALSE(density_isomorphic(a, basis_state({"x1", "x2"}, 0b11)));
}

TEST_CASE("density isomorphism uses the hint first") {
  DensityState a = basis_state({"p", "q"}, 0b01);
  DensityState b = basis_state({"u", "v"}, 0b10);
  std::map<VarName, VarName> hint{{"p", "v"}, {"q", "u"}};
  CHECK(density_isomorphic_detail(a, b, hint) == IsoVerdict::HintMatched);
  std::map<VarName, VarName> wrong{{"p", "u"}, {"q", "v"}};
  CHECK(density_isomorphic_detail(a, b, wrong) == IsoVerdict::PermutationMatched);
}

TEST_CASE("identity case with shuffled labels") {
  // Same assignment a=1, b=0, c=1 written under two label orders.
  DensityState a = basis_state({"a", "b", "c"}, 0b101);
  DensityState b = basis_state({"c", "a", "b"}, 0b110);
  std::map<VarName, VarName> hint{{"a", "a"}, {"b", "b"}, {"c", "c"}};
  CHECK(density_isomorphic_detail(a, b, hint) == IsoVerdict::HintMatched);
}

TEST_CASE("exhaustive search beyond six wires needs a hint") {
  std::vector<VarName> labels{"a", "b", "c", "d", "e", "f", "g"};
  DensityState a = DensityState::zeros(labels);
  DensityState b = DensityState::zeros(labels);
  CHECK_THROWS_AS((void)density_isomorphic(a, b, std::nullopt), Error);
  std::map<VarName, VarName> id;
  for (const auto& l : labels) id[l] = l;
  CHECK(density_isomorphic(a, b, id));
}

TEST_CASE("E-Init consumes the smallest free wire") {
  SourceProgram p = parse_source("main { let x = init() in (x) }");
  RunReport run = run_source(p, 2, 100);
  REQUIRE(run.traces.size() == 1);
  CHECK(run.traces[0].returned == std::vector<VarName>{"%w0000"});
}

TEST_CASE("init with an empty pool is the no-free-qubit stuck state") {
  SourceProgram p = parse_source("main { let x = init() in (x) }");
  RunReport run = run_source(p, 0, 100);
  REQUIRE(run.stuck.size() == 1);
  CHECK(run.stuck[0].kind == ErrorKind::StuckNoFreeQubit);
}

TEST_CASE("one measurement yields two branches with weights summing to one") {
  SourceProgram p = parse_source(
      "main { let x = init() in if x then { (x) } else { (x) } }");
  RunReport run = run_source(p, 1, 100);
  REQUIRE(run.traces.size() == 2);
  CHECK(run.traces[0].path == "E");
  CHECK(run.traces[1].path == "T");
  CHECK(run.traces[0].weight + run.traces[1].weight ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diverging recursion exhausts its fuel") {
  SourceProgram p = parse_source(
      "fun loop(x) { let (y) = loop(x) in (y) }"
      " main { let a = init() in let (b) = loop(a) in (b) }");
  RunReport run = run_source(p, 1, 500);
  CHECK(run.fuel_exhausted);
  CHECK(run.traces.empty());
}

TEST_CASE("target cnot across QX2's missing edge sticks") {
  TargetProgram p = parse_target(
      "main { qubits: a@q1 b@q4 let (x, y) = cnot(a, b) in (x, y) }");
  RunReport run = run_target(p, qalloc::test::qx2(), 100);
  REQUIRE(run.stuck.size() == 1);
  CHECK(run.stuck[0].kind == ErrorKind::ConnectivityStuck);
}

TEST_CASE("target init resets a wire to |0>") {
  TargetProgram p = parse_target("main { qubits: a@q0 init a; (a) }");
  CouplingGraph g = parse_coupling_graph("nodes: q0\n");
  RunReport run = run_target(p, g, 100);
  REQUIRE(run.traces.size() == 1);
  CHECK(std::abs(run.traces[0].state.rho(0, 0) - std::complex<double>(1.0)) <= 1e-12);
}

TEST_CASE("semantic preservation for the distance-2 cnot program") {
  SourceProgram p = parse_source(
      "main { let a = init() in let b = init() in let c = init() in"
      " let (x, y) = cnot(a, c) in (x, b, y) }");
  CouplingGraph g = qalloc::test::path3();
  AllocResult r = qubit_alloc(check_program(p, 3), g);
  PreservationReport report = check_semantic_preservation(p, r.program, g, 10000);
  CHECK(report.ok());
  REQUIRE(report.branches.size() == 1);
  CHECK(report.branches[0].weights_match);
  CHECK(report.branches[0].isomorphic);
}

TEST_CASE("semantic preservation across measurement branches") {
  SourceProgram p = parse_source(
      "main { let a = init() in let b = init() in let (x, y) = cnot(a, b) in"
      " if x then { let (p, q) = cnot(x, y) in (p, q) } else { (x, y) } }");
  CouplingGraph g = qalloc::test::path3();
  AllocResult r = qubit_alloc(check_program(p, 3), g);
  PreservationReport report = check_semantic_preservation(p, r.program, g, 10000);
  CHECK(report.ok());
  CHECK(report.branches.size() == 2);
  for (const auto& b : report.branches) {
    CHECK(b.weights_match);
    CHECK(b.isomorphic);
  }
}

TEST_CASE("empirical subject reduction with budget conservation") {
  // N + |dom(Γ)| stays constant along every source step, and each successor
  // re-types at the adjusted budget.
  Rng rng(62);
  FuzzConfig cfg;
  cfg.allow_recursion = false;
  cfg.max_funs = 2;
  for (int i = 0; i < 15; ++i) {
    SourceProgram p = random_program(rng, cfg, 4);
    SrcFunEnv theta = check_fundefs(p.defs);
    int n0 = minimal_entry_budget(p);
    auto defs = defs_by_name(p);
    FreshNames fresh;
    struct Item {
      SrcConfig cfg;
      int budget;
    };
    std::vector<Item> stack{{initial_source_config(p, static_cast<std::size_t>(n0)), n0}};
    int steps = 0;
    while (!stack.empty() && steps < 300) {
      Item item = std::move(stack.back());
      stack.pop_back();
      std::set<VarName> fv_before = free_vars(item.cfg.expr);
      StepResult<SrcConfig> result = step_src(item.cfg, defs, fresh);
      REQUIRE(result.kind != StepKind::Stuck);  // progress, empirically
      if (result.kind == StepKind::Value) continue;
      ++steps;
      for (auto& [succ, branch] : result.successors) {
        std::set<VarName> fv_after = free_vars(succ.expr);
        int budget_after = item.budget + static_cast<int>(fv_before.size()) -
                           static_cast<int>(fv_after.size());
        REQUIRE(budget_after >= 0);
        CHECK(succ.free_wires.size() >= static_cast<std::size_t>(budget_after));
        SrcTypeEnv gamma;
        for (const auto& v : fv_after) gamma.emplace(v, SimpleType::Qbit);
        CHECK_NOTHROW(check_expr(theta, budget_after, gamma, succ.expr));
        // States stay physical along the way.
        CHECK(is_hermitian(succ.state));
        CHECK(is_positive_semidefinite(succ.state));
        stack.push_back({std::move(succ), budget_after});
      }
    }
  }
}

TEST_CASE("empirical subject reduction for the target") {
  Rng rng(63);
  FuzzConfig cfg;
  cfg.allow_recursion = false;
  cfg.max_funs = 2;
  cfg.graph_min_nodes = 3;
  cfg.graph_max_nodes = 5;
  for (int i = 0; i < 10; ++i) {
    GeneratedCase gen = generate_case(rng, cfg);
    CheckedProgram checked =
        check_program(gen.program, static_cast<int>(gen.graph.node_count()));
    AllocResult r = qubit_alloc(checked, gen.graph);
    TgtFunEnv theta;
    for (const auto& d : r.program.defs) theta[d.name] = d.signature;
    TgtTypeEnv gamma;
    for (const auto& [v, q] : r.program.preamble) gamma.emplace(v, QType{q});
    ConstraintSet phi = gen.graph.to_constraints();

    auto defs = defs_by_name(r.program);
    auto [cfg0, wire_nodes] = initial_target_config(r.program);
    FreshNames fresh;
    std::vector<TgtConfig> stack{std::move(cfg0)};
    int steps = 0;
    while (!stack.empty() && steps < 200) {
      TgtConfig item = std::move(stack.back());
      stack.pop_back();
      StepResult<TgtConfig> result = step_tgt(item, defs, gen.graph, wire_nodes, fresh);
      REQUIRE(result.kind != StepKind::Stuck);
      if (result.kind == StepKind::Value) continue;
      ++steps;
      for (auto& [succ, branch] : result.successors) {
        CHECK_NOTHROW(check_expr_tgt(theta, phi, gamma, succ.expr));
        stack.push_back(std::move(succ));
      }
    }
  }
}

TEST_CASE("trace drift stays below 1e-12 per step over long runs") {
  // A diverging recursion with a cnot keeps stepping forever; watch 1000
  // steps of it and compare traces before and after each unitary/reset.
  SourceProgram p = parse_source(
      "fun spin(x, y) { let (a, b) = cnot(x, y) in let (c, d) = spin(a, b) in (c, d) }"
      " main { let u = init() in let v = init() in let (r, s) = spin(u, v) in (r, s) }");
  auto defs = defs_by_name(p);
  FreshNames fresh;
  SrcConfig cfg = initial_source_config(p, 2);
  double last_trace = cfg.state.trace_real();
  for (int step = 0; step < 1000; ++step) {
    StepResult<SrcConfig> result = step_src(cfg, defs, fresh);
    REQUIRE(result.kind == StepKind::Progress);
    REQUIRE(result.successors.size() == 1);
    cfg = std::move(result.successors[0].first);
    double now = cfg.state.trace_real();
    CHECK(std::abs(now - last_trace) <= 1e-12);
    last_trace = now;
  }
}

TEST_CASE("hadamard programs allocate and preserve semantics") {
  ParseOptions with_h{true};
  SourceProgram p = parse_source(
      "main { let a = init() in let b = init() in let h1 = h(a) in"
      " let (x, y) = cnot(h1, b) in (x, y) }",
      with_h);
  CouplingGraph g = qalloc::test::path3();
  AllocResult r = qubit_alloc(check_program(p, 3), g);
  CHECK(check_program_tgt(r.program, g).ok());
  PreservationReport report = check_semantic_preservation(p, r.program, g, 10000);
  CHECK(report.ok());
  // The entangled pair has weight-1/2 outcomes when measured.
  RunReport run = run_source(
      parse_source("main { let a = init() in let h1 = h(a) in"
                   " if h1 then { (h1) } else { (h1) } }",
                   with_h),
      1, 100);
  REQUIRE(run.traces.size() == 2);
  CHECK(run.traces[0].weight == doctest::Approx(0.5).epsilon(1e-12));
}
