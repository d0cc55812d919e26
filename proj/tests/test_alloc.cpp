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
#include "qalloc/check_target.hpp"
#include "qalloc/fuzz.hpp"
#include "qalloc/parser.hpp"
#include "qalloc/printer.hpp"

using namespace qalloc;
using qalloc::test::throws_kind;

namespace {

AllocResult alloc_text(const char* text, const CouplingGraph& graph) {
  SourceProgram p = parse_source(text);
  return qubit_alloc(check_program(p, static_cast<int>(graph.node_count())), graph);
}

int count_swaps(const TargetExprPtr& e) {
  return std::visit(
      [&](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TgtReturn>) {
          return 0;
        } else if constexpr (std::is_same_v<T, TgtSwapLet>) {
          return 1 + count_swaps(n.body);
        } else if constexpr (std::is_same_v<T, TgtIf>) {
          return count_swaps(n.then_branch) + count_swaps(n.else_branch);
        } else if constexpr (std::is_same_v<T, TgtTupleLet>) {
          return count_swaps(n.rhs) + count_swaps(n.body);
        } else {
          return count_swaps(n.body);
        }
      },
      e->node);
}

}  // namespace

TEST_CASE("insert_swaps base case leaves the expression alone") {
  auto e = tgt_return({"x"});
  CHECK(equal(insert_swaps(e, {{"x", QType{"a"}}}, {}), e));
}

TEST_CASE("insert_swaps emits let (x2, x1) = swap(x1, x2)") {
  TgtTypeEnv gamma{{"x", QType{"a"}}, {"y", QType{"b"}}};
  auto wrapped = insert_swaps(tgt_return({"x", "y"}), gamma, {{"a", "b"}});
  const auto& swap = std::get<TgtSwapLet>(wrapped->node);
  CHECK(swap.ins == std::pair<VarName, VarName>{"x", "y"});
  CHECK(swap.outs == std::pair<VarName, VarName>{"y", "x"});
}

TEST_CASE("insert_swaps nests a two-element sequence in order") {
  TgtTypeEnv gamma{{"x", QType{"a"}}, {"y", QType{"b"}}, {"z", QType{"c"}}};
  auto wrapped = insert_swaps(tgt_return({"x", "y", "z"}), gamma, {{"a", "b"}, {"b", "c"}});
  const auto& outer = std::get<TgtSwapLet>(wrapped->node);
  CHECK(outer.ins == std::pair<VarName, VarName>{"x", "y"});
  // After (a b), x occupies b; the second pair (b, c) therefore swaps x and z.
  const auto& inner = std::get<TgtSwapLet>(outer.body->node);
  CHECK(inner.ins == std::pair<VarName, VarName>{"x", "z"});
}

TEST_CASE("insert_swaps demands occupants for both qidxs") {
  TgtTypeEnv gamma{{"x", QType{"a"}}};
  CHECK(throws_kind(ErrorKind::MissingOccupant, [&] {
    insert_swaps(tgt_return({"x"}), gamma, {{"a", "b"}});
  }));
}

TEST_CASE("trivial main allocates to trivial main") {
  AllocResult r = alloc_text("main { () }", qalloc::test::qx2());
  CHECK(r.program.defs.empty());
  CHECK(count_swaps(r.program.entry) == 0);
  // Linearity: main returns all five preamble qubits.
  CHECK(std::get<TgtReturn>(r.program.entry->node).vars.size() == 5);
}

TEST_CASE("distance-2 cnot gets exactly one swap before the gate") {
  AllocResult r = alloc_text(
      "main { let a = init() in let b = init() in let c = init() in"
      " let (p, q) = cnot(a, c) in (p, b, q) }",
      qalloc::test::path3());
  CHECK(count_swaps(r.program.entry) == 1);
  // The swap comes before the cnot and there is no restoring swap after.
  const auto& swap = std::get<TgtSwapLet>(r.program.entry->node);
  CHECK(std::holds_alternative<TgtCnotLet>(swap.body->node));
  CHECK(check_program_tgt(r.program, qalloc::test::path3()).ok());
}

TEST_CASE("adjacent cnot emits no swaps") {
  AllocResult r = alloc_text(
      "main { let a = init() in let b = init() in let (p, q) = cnot(a, b) in (p, q) }",
      qalloc::test::path3());
  CHECK(count_swaps(r.program.entry) == 0);
}

TEST_CASE("discard becomes init and the return tuple is padded") {
  CouplingGraph g = qalloc::test::path3();
  AllocResult r = alloc_text(
      "main { let x = init() in let y = init() in discard x; (y) }", g);
  // Walk past the (absent) swaps: expect init x then the widened return.
  const auto& init = std::get<TgtInit>(r.program.entry->node);
  const auto& ret = std::get<TgtReturn>(init.body->node);
  CHECK(ret.vars.size() == 3);  // y, the re-initialized x, and the unused pad
  CHECK(check_program_tgt(r.program, g).ok());
}

TEST_CASE("zero-budget identity keeps its body and gains no parameters") {
  AllocResult r = alloc_text("fun id(x) { (x) } main { () }", qalloc::test::qx2());
  REQUIRE(r.program.defs.size() == 1);
  const TargetFunDef& id = r.program.defs[0];
  CHECK(id.params == std::vector<VarName>{"x"});
  CHECK(id.signature.quantified == std::vector<Qidx>{"a1"});
  CHECK(id.signature.constraints.empty());
  CHECK(id.signature.params == TgtTupleType{QType{"a1"}});
  CHECK(id.signature.results == TgtTupleType{QType{"a1"}});
  CHECK(equal(id.body, tgt_return({"x"})));
}

TEST_CASE("Fig. 5: the two-argument one-budget function gains a third qubit") {
  const char* text =
      "fun func(a, b) {\n"
      "  let c = init() in\n"
      "  let (a1, c1) = cnot(a, c) in\n"
      "  let (b1, c2) = cnot(b, c1) in\n"
      "  discard c2;\n"
      "  (a1, b1)\n"
      "}\n"
      "main {\n"
      "  let x = init() in\n"
      "  let y = init() in\n"
      "  let (u, v) = func(x, y) in\n"
      "  let w = init() in\n"
      "  let (s, t) = func(v, w) in\n"
      "  (u, s, t)\n"
      "}\n";
  CouplingGraph g = qalloc::test::fig5_graph();
  SourceProgram p = parse_source(text);
  AllocResult r = qubit_alloc(check_program(p, 4), g);

  REQUIRE(r.program.defs.size() == 1);
  const TargetFunDef& func = r.program.defs[0];
  CHECK(func.params.size() == 3);
  CHECK(func.signature.quantified.size() == 3);
  // The workspace is the triangle q1 q2 q3: all three pairs connected.
  CHECK(func.signature.constraints.size() == 3);
  CHECK(r.trace.fn_workspace_nodes.at("func") == std::vector<Qidx>{"q1", "q2", "q3"});

  // First call site: arguments already sit on the triangle, no swaps.
  // Second call site: arguments must be moved, at least one swap cluster.
  int swaps_before_first_call = 0;
  TargetExprPtr cursor = r.program.entry;
  while (!std::holds_alternative<TgtCallLet>(cursor->node)) {
    if (std::holds_alternative<TgtSwapLet>(cursor->node)) {
      ++swaps_before_first_call;
      cursor = std::get<TgtSwapLet>(cursor->node).body;
    } else if (std::holds_alternative<TgtTupleLet>(cursor->node)) {
      cursor = std::get<TgtTupleLet>(cursor->node).body;
    } else if (std::holds_alternative<TgtInit>(cursor->node)) {
      cursor = std::get<TgtInit>(cursor->node).body;
    } else {
      FAIL("unexpected node before the first call");
    }
  }
  CHECK(swaps_before_first_call == 0);
  CHECK(count_swaps(r.program.entry) >= 1);  // the second call site needs swaps
  CHECK(check_program_tgt(r.program, g).ok());
}

TEST_CASE("call-free straight-line programs on complete graphs need no swaps") {
  CouplingGraph k4({"a", "b", "c", "d"},
                   {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "d"}});
  AllocResult r = alloc_text(
      "main { let w = init() in let x = init() in let y = init() in"
      " let (p, q) = cnot(w, x) in let (s, t) = cnot(q, y) in (p, s, t) }",
      k4);
  CHECK(count_swaps(r.program.entry) == 0);
}

TEST_CASE("allocation fails loudly when the device is too small") {
  SourceProgram p = parse_source("fun big(a, b) { let c = init() in (a, b, c) } main { () }");
  CouplingGraph tiny = qalloc::test::path({"a", "b"});
  CHECK(throws_kind(ErrorKind::DeviceTooSmall,
                    [&] { qubit_alloc(check_program(p, 2), tiny); }));
}

TEST_CASE("rebinding a discarded name allocates correctly") {
  CouplingGraph g = qalloc::test::path3();
  AllocResult r = alloc_text(
      "main { let x = init() in discard x; let x = init() in (x) }", g);
  CHECK(check_program_tgt(r.program, g).ok());
}

TEST_CASE("if branches re-converge to one placement") {
  CouplingGraph g = qalloc::test::path3();
  AllocResult r = alloc_text(
      "main { let a = init() in let b = init() in let c = init() in"
      " if b then { let (p, q) = cnot(a, c) in (p, b, q) }"
      " else { (a, b, c) } }",
      g);
  CHECK(check_program_tgt(r.program, g).ok());
}

TEST_CASE("allocated outputs re-verify after print and re-parse") {
  Rng rng(51);
  FuzzConfig cfg;
  for (int i = 0; i < 20; ++i) {
    GeneratedCase gen = generate_case(rng, cfg);
    CheckedProgram checked =
        check_program(gen.program, static_cast<int>(gen.graph.node_count()));
    AllocResult r = qubit_alloc(checked, gen.graph);
    TargetProgram reparsed = parse_target(print_target(r.program));
    CHECK(equal(reparsed, r.program));
    CHECK(check_program_tgt(reparsed, gen.graph).ok());
  }
}

TEST_CASE("type preservation on fuzzed programs") {
  Rng rng(52);
  FuzzConfig cfg;
  for (int i = 0; i < 60; ++i) {
    GeneratedCase gen = generate_case(rng, cfg);
    CheckedProgram checked =
        check_program(gen.program, static_cast<int>(gen.graph.node_count()));
    AllocResult r = qubit_alloc(checked, gen.graph);
    CHECK(check_program_tgt(r.program, gen.graph).ok());
  }
}
