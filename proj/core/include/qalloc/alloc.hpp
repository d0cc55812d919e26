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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qalloc/ast.hpp"
#include "qalloc/check_source.hpp"
#include "qalloc/graph.hpp"

namespace qalloc {

// Correspondence between a source return tuple and the padded target return
// tuple at one leaf of the program, keyed by the if-outcomes taken to reach
// it ('T'/'E' per branch). Positions pair up: target_vars[i] is the
// allocated descendant of source_vars[i] for i < |source_vars|; the rest is
// padding. The simulator's isomorphism check consumes this.
struct ReturnCorrespondence {
  std::string owner;  // "main" or a function name
  std::string path;
  std::vector<VarName> source_vars;
  std::vector<VarName> target_vars;
};

struct AllocTrace {
  std::vector<std::pair<VarName, Qidx>> preamble;
  std::map<FunName, std::vector<Qidx>> fn_workspace_nodes;
  std::vector<ReturnCorrespondence> returns;
};

struct AllocResult {
  TargetProgram program;
  AllocTrace trace;
};

// The qubit-allocation translation: a checked source program plus a
// connected coupling graph with |V| >= the checked budget yields a target
// program that passes check_program_tgt (verified before returning; failure
// to do so is an InternalPostconditionViolation, i.e. a bug here).
AllocResult qubit_alloc(const CheckedProgram& checked, const CouplingGraph& graph);

// Wraps `expr` with one `let (x2, x1) = swap(x1, x2) in ...` per pair of
// `psi`, innermost first, so each swap sees the placement produced by the
// previous ones. Requires `expr` to be well typed under
// apply_swaps_to_env(psi, gamma); throws Error(MissingOccupant) if a qidx in
// psi has no variable in gamma.
TargetExprPtr insert_swaps(const TargetExprPtr& expr, const TgtTypeEnv& gamma,
                           const SwapSequence& psi);

}  // namespace qalloc
