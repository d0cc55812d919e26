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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qalloc/ast.hpp"
#include "qalloc/graph.hpp"

namespace qalloc {

using Rng = std::mt19937_64;

struct FuzzConfig {
  std::uint64_t seed = 0;
  int count = 100;
  int max_qubits = 5;  // upper bound on the entry expression's budget
  int max_depth = 8;
  int max_funs = 3;
  int graph_min_nodes = 5;
  int graph_max_nodes = 8;
  double extra_edge_prob = 0.3;
  bool allow_recursion = true;
};

struct GeneratedCase {
  SourceProgram program;
  CouplingGraph graph;
};

// Uniform spanning tree plus extra edges with the given probability; nodes
// are named q0..q{n-1}.
CouplingGraph random_connected_graph(Rng& rng, std::size_t nodes, double extra_edge_prob);

// Generates a well-typed program top-down against the typing rules: the
// generation itself is a derivation, so every emitted program checks.
// `budget_cap` bounds both the entry budget and any function's workspace
// (arity + budget).
SourceProgram random_program(Rng& rng, const FuzzConfig& cfg, int budget_cap);

GeneratedCase generate_case(Rng& rng, const FuzzConfig& cfg);

// Outcome of the standard per-case verification pipeline.
struct FuzzCaseOutcome {
  int minimal_budget = 0;
  bool type_preservation = false;  // allocator output passes the target checker
  bool source_soundness = false;   // no StuckNoFreeQubit at |X| = minimal budget
  bool mutation_rejected = true;   // budget-1 fails to check (vacuous when budget 0)
  bool semantics_checked = false;
  bool semantics_preserved = false;
  std::size_t fallback_branches = 0;  // isomorphic only via non-positional permutation
  std::string error;  // non-empty when the pipeline itself failed

  bool hard_ok() const { return error.empty(); }
};

FuzzCaseOutcome evaluate_case(const GeneratedCase& gen, bool semantic_checks,
                              std::size_t fuel);

}  // namespace qalloc
