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
#include "qalloc/subst.hpp"

using namespace qalloc;

// Checker verdicts must be stable under meaning-preserving transformations:
// variable renaming, qidx renaming, and function-environment extension.

TEST_CASE("verdicts are stable under whole-program variable renaming") {
  Rng rng(71);
  FuzzConfig cfg;
  for (int i = 0; i < 50; ++i) {
    SourceProgram p = random_program(rng, cfg, 5);
    int n = minimal_entry_budget(p);

    // Simultaneous fresh renaming of the entry expression (Γ is empty, so
    // renaming binders suffices; free variables cannot occur).
    SourceExprPtr renamed = p.entry;
    FreshNames fresh;
    for (const auto& b : binder_names(p.entry)) {
      renamed = alpha_rename_binders(renamed, b, fresh);
    }
    SourceProgram q = p;
    q.entry = renamed;
    CHECK_NOTHROW(check_program(q, n));
    CHECK(minimal_entry_budget(q) == n);
  }
}

TEST_CASE("expression-level substitution lemma") {
  // If Θ | N | Γ ⊢ e : T then the judgment survives a simultaneous fresh
  // renaming of Γ and e.
  Rng rng(72);
  FuzzConfig cfg;
  cfg.max_funs = 0;
  for (int i = 0; i < 50; ++i) {
    SourceProgram whole = random_program(rng, cfg, 4);
    SourceExprPtr e = whole.entry;
    SrcTypeEnv gamma;
    int budget = minimal_entry_budget(whole);
    while (const auto* init = std::get_if<SrcInitLet>(&e->node)) {
      gamma.emplace(init->bound, SimpleType::Qbit);
      budget -= 1;
      e = init->body;
    }
    TupleType before = check_expr({}, budget, gamma, e);
    VarSubst bij;
    SrcTypeEnv renamed_gamma;
    int k = 0;
    for (const auto& [v, t] : gamma) {
      VarName nv = "fresh" + std::to_string(k++);
      bij[v] = nv;
      renamed_gamma.emplace(nv, t);
    }
    TupleType after = check_expr({}, budget, renamed_gamma, apply_var_subst(bij, e));
    CHECK(before == after);
  }
}

TEST_CASE("adding unused functions never changes the verdict") {
  Rng rng(73);
  FuzzConfig cfg;
  for (int i = 0; i < 50; ++i) {
    SourceProgram p = random_program(rng, cfg, 5);
    int n = minimal_entry_budget(p);
    SourceProgram extended = p;
    SourceFunDef unused;
    unused.name = "zzz_unused";
    unused.params = {"w"};
    unused.body = src_return({"w"});
    extended.defs.push_back(unused);
    CHECK_NOTHROW(check_program(extended, n));
    CHECK(minimal_entry_budget(extended) == n);
  }
}

TEST_CASE("success at N implies success at every larger budget") {
  Rng rng(74);
  FuzzConfig cfg;
  for (int i = 0; i < 50; ++i) {
    SourceProgram p = random_program(rng, cfg, 5);
    int n = minimal_entry_budget(p);
    for (int d : {1, 2, 5}) CHECK_NOTHROW(check_program(p, n + d));
    if (n >= 1) {
      CHECK(qalloc::test::throws_kind(ErrorKind::BudgetExceeded,
                                      [&] { check_program(p, n - 1); }));
    }
  }
}

TEST_CASE("target verdicts survive injective qidx renaming") {
  Rng rng(75);
  FuzzConfig cfg;
  cfg.graph_min_nodes = 3;
  cfg.graph_max_nodes = 6;
  for (int i = 0; i < 30; ++i) {
    GeneratedCase gen = generate_case(rng, cfg);
    CheckedProgram checked =
        check_program(gen.program, static_cast<int>(gen.graph.node_count()));
    AllocResult r = qubit_alloc(checked, gen.graph);
    REQUIRE(check_program_tgt(r.program, gen.graph).ok());

    QidxSubst rename;
    int k = 0;
    for (const auto& node : gen.graph.nodes()) rename[node] = "n" + std::to_string(k++);
    std::vector<Qidx> nodes;
    std::vector<std::pair<Qidx, Qidx>> edges;
    for (const auto& node : gen.graph.nodes()) nodes.push_back(rename.at(node));
    for (const auto& [a, b] : gen.graph.edges()) {
      edges.emplace_back(rename.at(a), rename.at(b));
    }
    CouplingGraph renamed_graph(nodes, edges);
    TargetProgram renamed = r.program;
    for (auto& [var, idx] : renamed.preamble) idx = rename.at(idx);
    // Definition signatures quantify their own (bound) qidxs; they are
    // untouched by a renaming of the device nodes.
    CHECK(check_program_tgt(renamed, renamed_graph).ok());
  }
}

TEST_CASE("target verdicts survive variable renaming of main") {
  Rng rng(76);
  FuzzConfig cfg;
  cfg.graph_min_nodes = 3;
  cfg.graph_max_nodes = 6;
  for (int i = 0; i < 30; ++i) {
    GeneratedCase gen = generate_case(rng, cfg);
    CheckedProgram checked =
        check_program(gen.program, static_cast<int>(gen.graph.node_count()));
    AllocResult r = qubit_alloc(checked, gen.graph);

    VarSubst bij;
    int k = 0;
    for (const auto& [var, idx] : r.program.preamble) {
      bij[var] = "mv" + std::to_string(k++);
    }
    TargetProgram renamed = r.program;
    for (auto& [var, idx] : renamed.preamble) var = bij.at(var);
    FreshNames fresh;
    renamed.entry = substitute_avoiding(bij, renamed.entry, fresh);
    CHECK(check_program_tgt(renamed, gen.graph).ok());
  }
}

TEST_CASE("extending the target function environment is harmless") {
  Rng rng(77);
  FuzzConfig cfg;
  for (int i = 0; i < 30; ++i) {
    GeneratedCase gen = generate_case(rng, cfg);
    CheckedProgram checked =
        check_program(gen.program, static_cast<int>(gen.graph.node_count()));
    AllocResult r = qubit_alloc(checked, gen.graph);
    TargetProgram extended = r.program;
    TargetFunDef unused;
    unused.name = "zzz_target_unused";
    unused.params = {"w"};
    unused.signature.quantified = {"a1"};
    unused.signature.params = {QType{"a1"}};
    unused.signature.results = {QType{"a1"}};
    unused.body = tgt_return({"w"});
    extended.defs.push_back(unused);
    CHECK(check_program_tgt(extended, gen.graph).ok());
  }
}
