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
#include "qalloc/fuzz.hpp"
#include "qalloc/printer.hpp"

using namespace qalloc;

TEST_CASE("smallest program") {
  SourceProgram p = parse_source("main { let x = init() in discard x; () }");
  CHECK(p.defs.empty());
  CHECK(equal(p.entry, src_init("x", src_discard("x", src_return({})))));
}

TEST_CASE("duplicate use parses; it is a type error, not a parse error") {
  SourceProgram p = parse_source("main { let x = init() in (x, x) }");
  const auto& init = std::get<SrcInitLet>(p.entry->node);
  CHECK(std::get<SrcReturn>(init.body->node).vars == std::vector<VarName>{"x", "x"});
}

TEST_CASE("duplicate function names are rejected at parse time") {
  CHECK_THROWS_AS(parse_source("fun f(x) { (x) } fun f(y) { (y) } main { () }"), ParseError);
}

TEST_CASE("reserved names are rejected in source programs") {
  CHECK_THROWS_AS(parse_source("main { let %v0 = init() in (%v0) }"), ParseError);
}

TEST_CASE("parse errors carry 1-based positions") {
  try {
    parse_source("main {\n  let = init() in ()\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span().line == 2);
    CHECK(e.span().column > 0);
  }
}

TEST_CASE("function definitions round the Fig. 5 shape") {
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
      "  let (s, t) = func(u, v) in\n"
      "  (s, t)\n"
      "}\n";
  SourceProgram p = parse_source(text);
  REQUIRE(p.defs.size() == 1);
  CHECK(p.defs[0].name == "func");
  CHECK(p.defs[0].params == std::vector<VarName>{"a", "b"});
  SourceProgram again = parse_source(print_source(p));
  CHECK(equal(p, again));
}

TEST_CASE("target: init, preamble and swap") {
  TargetProgram p = parse_target("main { qubits: x@q0 init x; (x) }");
  CHECK(p.preamble == std::vector<std::pair<VarName, Qidx>>{{"x", "q0"}});
  CHECK(equal(p.entry, tgt_init("x", tgt_return({"x"}))));

  TargetProgram q = parse_target(
      "main { qubits: x@q0 y@q1 let (p, q) = swap(x, y) in (p, q) }");
  CHECK(std::holds_alternative<TgtSwapLet>(q.entry->node));
}

TEST_CASE("target function headers carry quantifiers and constraints") {
  TargetProgram p = parse_target(
      "fun f<a, b | a~b>(x: q(a), y: q(b)) -> (q(a), q(b)) { (x, y) }\n"
      "main { () }");
  REQUIRE(p.defs.size() == 1);
  const TargetFunType& sig = p.defs[0].signature;
  CHECK(sig.quantified == std::vector<Qidx>{"a", "b"});
  CHECK(sig.constraints.contains("a", "b"));
  CHECK(sig.params.size() == 2);
  CHECK(sig.results.size() == 2);
}

TEST_CASE("empty main with empty preamble") {
  TargetProgram p = parse_target("main { () }");
  CHECK(p.preamble.empty());
  CHECK(equal(p.entry, tgt_return({})));
}

TEST_CASE("coupling graph: QX2 has 5 nodes and 6 edges") {
  CouplingGraph g = qalloc::test::qx2();
  CHECK(g.node_count() == 5);
  CHECK(g.edge_count() == 6);
}

TEST_CASE("coupling graph: Fig. 5 has 4 nodes and 4 edges") {
  CouplingGraph g = qalloc::test::fig5_graph();
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 4);
}

TEST_CASE("coupling graph: single node, no edges") {
  CouplingGraph g = parse_coupling_graph("nodes: solo\n");
  CHECK(g.node_count() == 1);
  CHECK(g.is_connected());
}

TEST_CASE("coupling graph errors") {
  CHECK_THROWS_AS(parse_coupling_graph("nodes: a b\nedges: a-c\n"), ParseError);
  CHECK_THROWS_AS(parse_coupling_graph("nodes: a b\nedges: a-a\n"), ParseError);
  CHECK_THROWS_AS(parse_coupling_graph("nodes: a b\n"), ParseError);  // disconnected
}

TEST_CASE("graph parsing ignores direction, duplicates and line order") {
  CouplingGraph a = parse_coupling_graph("nodes: x y z\nedges: x-y y-z\n");
  CouplingGraph b = parse_coupling_graph(
      "# comment\nnodes: x y z\nedges: z-y\nedges: y-x x-y\n");
  CHECK(a == b);
}

TEST_CASE("round-trip law on fuzzed programs") {
  Rng rng(21);
  FuzzConfig cfg;
  for (int i = 0; i < 60; ++i) {
    SourceProgram p = random_program(rng, cfg, 5);
    CHECK(equal(p, parse_source(print_source(p))));
  }
}

TEST_CASE("round-trip law on allocated target programs") {
  // Covered in depth by the allocator tests; here: a hand-written target.
  const char* text =
      "fun g<a1>(x: q(a1)) -> (q(a1)) {\n  init x;\n  (x)\n}\n\n"
      "main {\n  qubits: w@q0\n  let (r) = g(w) in\n  (r)\n}\n";
  TargetProgram p = parse_target(text);
  CHECK(equal(p, parse_target(print_target(p))));
}

TEST_CASE("printer output is stable") {
  SourceProgram p = parse_source("main { () }");
  CHECK(print_source(p) == "main {\n  ()\n}\n");
  CHECK(print_source_expr(src_return({})) == "()\n");
}

TEST_CASE("parser totality: garbage either parses or raises ParseError") {
  Rng rng(22);
  const char alphabet[] = "abq01(){}<>,;:=@~|-%/* \n\tmainletinitfun";
  for (int i = 0; i < 300; ++i) {
    std::string text;
    std::size_t len = rng() % 60;
    for (std::size_t j = 0; j < len; ++j) {
      text += alphabet[rng() % (sizeof(alphabet) - 1)];
    }
    try {
      parse_source(text);
    } catch (const ParseError&) {
    }
    try {
      parse_target(text);
    } catch (const ParseError&) {
    }
    try {
      parse_coupling_graph(text);
    } catch (const ParseError&) {
    }
  }
  CHECK(true);  // reaching here means no crash / foreign exception
}

TEST_CASE("the h gate is only available behind the feature flag") {
  CHECK_THROWS_AS(parse_source("main { let x = init() in let y = h(x) in (y) }"),
                  ParseError);
  ParseOptions with_h{true};
  SourceProgram p =
      parse_source("main { let x = init() in let y = h(x) in (y) }", with_h);
  CHECK(std::holds_alternative<SrcHLet>(
      std::get<SrcInitLet>(p.entry->node).body->node));
  CHECK(equal(p, parse_source(print_source(p), with_h)));
}
