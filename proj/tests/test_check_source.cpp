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
#include "qalloc/check_source.hpp"
#include "qalloc/fuzz.hpp"
#include "qalloc/parser.hpp"
#include "qalloc/subst.hpp"

using namespace qalloc;
using qalloc::test::throws_kind;

namespace {

SourceExprPtr entry_of(const char* text) { return parse_source(text).entry; }

}  // namespace

TEST_CASE("init then return types as a 1-tuple") {
  TupleType t = check_expr({}, 1, {}, entry_of("main { let x = init() in (x) }"));
  CHECK(t == TupleType{SimpleType::Qbit});
}

TEST_CASE("init at budget 0 exceeds the budget") {
  CHECK(throws_kind(ErrorKind::BudgetExceeded, [] {
    check_expr({}, 0, {}, entry_of("main { let x = init() in (x) }"));
  }));
}

TEST_CASE("budget spine of the two-qubit program is 2,1,0,0,1") {
  auto e = entry_of(
      "main { let x = init() in let y = init() in let (a, b) = cnot(x, y) in"
      " discard a; (b) }");
  SrcDerivation d;
  TupleType t = check_expr({}, 2, {}, e, &d);
  CHECK(t == TupleType{SimpleType::Qbit});
  std::vector<int> spine;
  const SrcDerivation* cur = &d;
  while (true) {
    spine.push_back(cur->budget);
    if (cur->premises.empty()) break;
    cur = &cur->premises.back();
  }
  CHECK(spine == std::vector<int>{2, 1, 0, 0, 1});
  CHECK(d.rule == "T-Init");
}

TEST_CASE("if with identical branches") {
  SrcTypeEnv gamma{{"x", SimpleType::Qbit}};
  TupleType t = check_expr({}, 0, gamma, src_if("x", src_return({"x"}), src_return({"x"})));
  CHECK(t.size() == 1);
}

TEST_CASE("linearity: unreturned variables are an error") {
  SrcTypeEnv gamma{{"x", SimpleType::Qbit}, {"y", SimpleType::Qbit}};
  CHECK(throws_kind(ErrorKind::UnusedVariable,
                    [&] { check_expr({}, 0, gamma, src_return({"x"})); }));
}

TEST_CASE("duplicate use is a type error") {
  CHECK(throws_kind(ErrorKind::DuplicateVariable, [] {
    check_program(parse_source("main { let x = init() in (x, x) }"), 1);
  }));
}

TEST_CASE("shadowing is prohibited") {
  CHECK(throws_kind(ErrorKind::DuplicateVariable, [] {
    check_program(parse_source("main { let x = init() in let x = init() in (x, x) }"), 2);
  }));
}

TEST_CASE("unknown variable") {
  CHECK(throws_kind(ErrorKind::UnknownVariable,
                    [] { check_program(parse_source("main { (ghost) }"), 0); }));
}

TEST_CASE("returns may permute the environment") {
  // Γ is a set; the return order fixes the tuple order.
  SrcTypeEnv gamma{{"x", SimpleType::Qbit}, {"y", SimpleType::Qbit}};
  CHECK(check_expr({}, 0, gamma, src_return({"y", "x"})).size() == 2);
}

TEST_CASE("function budgets are inferred") {
  SUBCASE("no init means budget 0") {
    SrcFunEnv theta = check_fundefs(parse_source("fun id(x) { (x) } main { () }").defs);
    CHECK(theta.at("id").budget == 0);
    CHECK(theta.at("id").params.size() == 1);
    CHECK(theta.at("id").results.size() == 1);
  }
  SUBCASE("one net init means budget 1") {
    SrcFunEnv theta =
        check_fundefs(parse_source("fun mk() { let x = init() in (x) } main { () }").defs);
    CHECK(theta.at("mk") == SourceFunType{{}, 1, {SimpleType::Qbit}});
  }
  SUBCASE("empty definition list") { CHECK(check_fundefs({}).empty()); }
}

TEST_CASE("self-recursive identity is typeable at budget 0") {
  SourceProgram p = parse_source(
      "fun loop(x) { let (y) = loop(x) in (y) } main { let a = init() in"
      " let (b) = loop(a) in (b) }");
  SrcFunEnv theta = check_fundefs(p.defs);
  CHECK(theta.at("loop").budget == 0);
  CHECK_NOTHROW(check_program(p, 1));
}

TEST_CASE("whole-program acceptance depends on the device budget") {
  SourceProgram p = parse_source(
      "main { let x = init() in let y = init() in let (a, b) = cnot(x, y) in"
      " discard a; (b) }");
  CHECK_NOTHROW(check_program(p, 2));
  CHECK(throws_kind(ErrorKind::BudgetExceeded, [&] { check_program(p, 1); }));
  CHECK(minimal_entry_budget(p) == 2);
}

TEST_CASE("trivial program checks at budget 0") {
  CHECK_NOTHROW(check_program(parse_source("main { () }"), 0));
}

TEST_CASE("call arity mismatches") {
  SourceProgram p = parse_source(
      "fun id(x) { (x) } main { let a = init() in let b = init() in"
      " let (r) = id(a, b) in (r) }");
  CHECK(throws_kind(ErrorKind::ArityMismatch, [&] { check_program(p, 2); }));
}

TEST_CASE("branch type mismatch") {
  SourceProgram p = parse_source(
      "main { let x = init() in if x then { discard x; () } else { (x) } }");
  CHECK(throws_kind(ErrorKind::BranchMismatch, [&] { check_program(p, 1); }));
}

TEST_CASE("budget monotonicity on fuzzed programs") {
  Rng rng(31);
  FuzzConfig cfg;
  for (int i = 0; i < 40; ++i) {
    SourceProgram p = random_program(rng, cfg, 5);
    int n = minimal_entry_budget(p);
    for (int extra = 1; extra <= 3; ++extra) {
      CHECK_NOTHROW(check_program(p, n + extra));
    }
  }
}

TEST_CASE("accepted judgments satisfy dom(gamma) = FV(e)") {
  Rng rng(32);
  FuzzConfig cfg;
  cfg.max_funs = 0;
  for (int i = 0; i < 40; ++i) {
    SourceProgram whole = random_program(rng, cfg, 4);
    // Peel binders off the front to obtain exprs with free variables.
    SourceExprPtr e = whole.entry;
    SrcTypeEnv gamma;
    int budget = minimal_entry_budget(whole);
    while (const auto* init = std::get_if<SrcInitLet>(&e->node)) {
      gamma.emplace(init->bound, SimpleType::Qbit);
      budget -= 1;
      e = init->body;
    }
    REQUIRE(budget >= 0);
    std::set<VarName> dom;
    for (const auto& [v, t] : gamma) dom.insert(v);
    CHECK(dom == free_vars(e));  // linearity: every binding is used
    CHECK_NOTHROW(check_expr({}, budget, gamma, e));
  }
}
