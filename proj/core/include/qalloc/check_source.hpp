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

#include <string>
#include <vector>

#include "qalloc/ast.hpp"

namespace qalloc {

// One node of a typing derivation: the rule instantiated, the judgment's
// budget and environment domain, and the concluded tuple type.
struct SrcDerivation {
  std::string rule;
  int budget = 0;
  std::vector<VarName> gamma;
  TupleType type;
  std::vector<SrcDerivation> premises;
};

struct CheckedProgram {
  SourceProgram program;
  SrcFunEnv theta;
  int checked_budget = 0;
  SrcDerivation derivation;  // rooted at T-Prog
};

// Θ | N | Γ ⊢ e : T. Syntax-directed; throws Error with one of the source
// checker kinds on violation. `derivation`, when non-null, receives the full
// derivation tree.
TupleType check_expr(const SrcFunEnv& theta, int n, const SrcTypeEnv& gamma,
                     const SourceExprPtr& expr, SrcDerivation* derivation = nullptr);

// Builds Θ left to right. Budgets are not written in the source syntax; the
// minimal budget of each function is inferred (fixpoint iteration for
// self-recursive definitions) and then validated by an actual check of the
// body at that budget.
SrcFunEnv check_fundefs(const std::vector<SourceFunDef>& defs);

// Whole-program judgment N ⊢ <D, e>: checks all definitions, then the entry
// expression under the empty environment and budget `n`.
CheckedProgram check_program(const SourceProgram& program, int n);

// Least n for which check_program succeeds (definitions must be well typed).
int minimal_entry_budget(const SourceProgram& program);

std::string explain(const SrcDerivation& derivation);

}  // namespace qalloc
