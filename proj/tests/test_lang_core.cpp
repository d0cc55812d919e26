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
#include "qalloc/subst.hpp"

using namespace qalloc;
using qalloc::test::throws_kind;

TEST_CASE("var substitution renames free occurrences") {
  auto e = src_return({"x", "z"});
  auto r = apply_var_subst({{"x", "y"}}, e);
  CHECK(equal(r, src_return({"y", "z"})));
}

TEST_CASE("var substitution is simultaneous") {
  auto e = src_return({"x", "y"});
  auto r = apply_var_subst({{"x", "y"}, {"y", "x"}}, e);
  CHECK(equal(r, src_return({"y", "x"})));
}

TEST_CASE("renaming onto a binder in scope is a capture error") {
  // [x'/x] on `let x = init() in (x)`
  auto e = src_init("x", src_return({"x"}));
  CHECK(throws_kind(ErrorKind::CaptureError,
                    [&] { apply_var_subst({{"x'", "x"}}, e); }));
}

TEST_CASE("binders shadow the substitution") {
  // [x -> y] under a rebinding of x leaves the bound occurrence alone
  auto e = src_discard("x", src_init("x", src_return({"x"})));
  auto r = apply_var_subst({{"x", "y"}}, e);
  CHECK(equal(r, src_discard("y", src_init("x", src_return({"x"})))));
}

TEST_CASE("capture-avoiding substitution renames the binder instead") {
  auto e = src_init("x", src_return({"x", "a"}));
  FreshNames fresh;
  auto r = substitute_avoiding({{"a", "x"}}, e, fresh);
  const auto& init = std::get<SrcInitLet>(r->node);
  CHECK(init.bound != "x");
  const auto& ret = std::get<SrcReturn>(init.body->node);
  CHECK(ret.vars == std::vector<VarName>{init.bound, "x"});
}

TEST_CASE("substitution is idempotent when keys and images are disjoint") {
  Rng rng(11);
  FuzzConfig cfg;
  cfg.max_funs = 0;
  for (int i = 0; i < 30; ++i) {
    SourceProgram p = random_program(rng, cfg, 4);
    VarSubst subst;
    int k = 0;
    for (const auto& v : free_vars(p.entry)) subst[v] = "fv" + std::to_string(k++);
    auto once = apply_var_subst(subst, p.entry);
    auto twice = apply_var_subst(subst, once);
    CHECK(equal(once, twice));
  }
}

TEST_CASE("free vars map through substitutions") {
  Rng rng(12);
  FuzzConfig cfg;
  cfg.max_funs = 0;
  for (int i = 0; i < 30; ++i) {
    SourceProgram whole = random_program(rng, cfg, 4);
    // Grab a subexpression with free variables: step past the first init.
    SourceExprPtr e = whole.entry;
    while (const auto* init = std::get_if<SrcInitLet>(&e->node)) e = init->body;
    VarSubst subst;
    int k = 0;
    for (const auto& v : free_vars(e)) subst[v] = "fv" + std::to_string(k++);
    std::set<VarName> expected;
    for (const auto& v : free_vars(e)) expected.insert(subst.at(v));
    CHECK(free_vars(apply_var_subst(subst, e)) == expected);
  }
}

TEST_CASE("swap application to environments") {
  TgtTypeEnv gamma{{"x", QType{"a"}}};
  SUBCASE("empty sequence") { CHECK(apply_swaps_to_env({}, gamma) == gamma); }
  SUBCASE("single transposition") {
    gamma.emplace("y", QType{"b"});
    TgtTypeEnv out = apply_swaps_to_env({{"a", "b"}}, gamma);
    CHECK(out.at("x").idx == "b");
    CHECK(out.at("y").idx == "a");
  }
  SUBCASE("two transpositions compose left to right") {
    gamma.emplace("y", QType{"b"});
    gamma.emplace("z", QType{"c"});
    TgtTypeEnv out = apply_swaps_to_env({{"a", "b"}, {"b", "c"}}, gamma);
    CHECK(out.at("x").idx == "c");
    CHECK(out.at("y").idx == "a");
    CHECK(out.at("z").idx == "b");
  }
  SUBCASE("one-sided pair moves the single occupant") {
    TgtTypeEnv out = apply_swaps_to_env({{"a", "unoccupied"}}, gamma);
    CHECK(out.at("x").idx == "unoccupied");
  }
}

TEST_CASE("swap-sequence concatenation equals sequential application") {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    CouplingGraph g = random_connected_graph(rng, 5, 0.4);
    TgtTypeEnv gamma;
    int k = 0;
    for (const auto& n : g.nodes()) gamma.emplace("v" + std::to_string(k++), QType{n});
    auto random_seq = [&](std::size_t len) {
      SwapSequence s;
      std::vector<std::pair<Qidx, Qidx>> edges(g.edges().begin(), g.edges().end());
      for (std::size_t j = 0; j < len; ++j) s.push_back(edges[rng() % edges.size()]);
      return s;
    };
    SwapSequence s1 = random_seq(3), s2 = random_seq(2);
    SwapSequence cat = s1;
    cat.insert(cat.end(), s2.begin(), s2.end());
    CHECK(apply_swaps_to_env(cat, gamma) ==
          apply_swaps_to_env(s2, apply_swaps_to_env(s1, gamma)));
    // Transpositions are self-inverse: the reversed sequence undoes them.
    SwapSequence rev(cat.rbegin(), cat.rend());
    CHECK(apply_swaps_to_env(rev, apply_swaps_to_env(cat, gamma)) == gamma);
  }
}

TEST_CASE("constraint sets are canonical and reject self-loops") {
  ConstraintSet phi;
  phi.add("b", "a");
  CHECK(phi.contains("a", "b"));
  CHECK(phi.contains("b", "a"));
  phi.add("a", "b");
  CHECK(phi.size() == 1);
  CHECK(throws_kind(ErrorKind::WellFormednessViolation, [&] { phi.add("a", "a"); }));
}
