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

#include <optional>
#include <string>
#include <vector>

#include "qalloc/ast.hpp"
#include "qalloc/graph.hpp"
#include "qalloc/subst.hpp"

namespace qalloc {

struct Diagnostic {
  ErrorKind kind;
  Span span;
  std::string message;
};

struct TgtDerivation {
  std::string rule;
  std::vector<std::pair<VarName, Qidx>> gamma;
  TgtTupleType type;
  std::vector<TgtDerivation> premises;
};

struct TgtCheckResult {
  std::vector<Diagnostic> diagnostics;
  std::vector<TgtDerivation> derivations;  // one per definition, then main
  bool ok() const { return diagnostics.empty(); }
};

// Instantiation of a polymorphic signature at a call site. σ is determined
// by first-order matching of parameter qidxs against argument qidxs; this is
// deterministic because every quantified qidx occurs in the parameters.
struct Instantiation {
  QidxSubst subst;
  TgtTupleType results;
};

// Throws InstantiationConflict, NonInjectiveInstantiation or
// MalformedSignature. The σΦ' ⊆ Φ side condition is the caller's to check.
Instantiation instantiate_call(const TargetFunType& signature, const TgtTupleType& arg_types);

// Θ | Φ | Γ ⊢ e : T. Requires WF(Φ|Γ): distinct variables carry distinct
// qidxs. `device`, when given, is only used to compute routing hints in
// connectivity diagnostics.
TgtTupleType check_expr_tgt(const TgtFunEnv& theta, const ConstraintSet& phi,
                            const TgtTypeEnv& gamma, const TargetExprPtr& expr,
                            TgtDerivation* derivation = nullptr,
                            const CouplingGraph* device = nullptr);

// Checks all definitions (polymorphic recursion allowed), then the entry
// expression under the `qubits:` preamble, with Φ = E(G). Diagnostics are
// aggregated, one per violation, instead of stopping at the first.
TgtCheckResult check_program_tgt(const TargetProgram& program, const CouplingGraph& graph);

std::string explain(const TgtDerivation& derivation);

}  // namespace qalloc
