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
#include <set>
#include <string>
#include <vector>

#include "qalloc/alloc.hpp"
#include "qalloc/ast.hpp"
#include "qalloc/density.hpp"
#include "qalloc/graph.hpp"

namespace qalloc {

// ---------------------------------------------------------------------------
// Runtime states.
// ---------------------------------------------------------------------------

// <X, rho, e>: free wires, labeled density operator, reducing expression.
struct SrcConfig {
  std::set<VarName> free_wires;
  DensityState state;
  SourceExprPtr expr;
};

// <rho, e>: in the target the wire set never changes.
struct TgtConfig {
  DensityState state;
  TargetExprPtr expr;
};

struct StuckInfo {
  ErrorKind kind = ErrorKind::StuckIllFormed;
  std::string message;
};

enum class StepKind { Value, Progress, Stuck };

template <typename Config>
struct StepResult {
  StepKind kind = StepKind::Stuck;
  // Successors carry the measurement outcome when the step was an if.
  std::vector<std::pair<Config, std::optional<bool>>> successors;
  StuckInfo stuck;
};

// One small step of the source relation. Deterministic: E-Init consumes the
// smallest free wire. If-expressions yield both measurement branches with
// unnormalized post-measurement states (outcome 1 first).
StepResult<SrcConfig> step_src(const SrcConfig& config,
                               const std::map<FunName, SourceFunDef>& defs,
                               FreshNames& fresh);

// One small step of the target relation; cnot/swap on wires whose nodes are
// not adjacent in the graph stick with ConnectivityStuck.
StepResult<TgtConfig> step_tgt(const TgtConfig& config,
                               const std::map<FunName, TargetFunDef>& defs,
                               const CouplingGraph& graph,
                               const std::map<VarName, Qidx>& wire_nodes, FreshNames& fresh);

// ---------------------------------------------------------------------------
// Branch exploration.
// ---------------------------------------------------------------------------

struct BranchTrace {
  std::string path;  // if-outcomes along the way, 'T'/'E'
  std::vector<VarName> returned;
  DensityState state;
  double weight = 0.0;
};

struct StuckReport {
  ErrorKind kind;
  std::string message;
  std::string path;
};

struct RunReport {
  std::vector<BranchTrace> traces;
  std::vector<StuckReport> stuck;
  bool fuel_exhausted = false;
  std::size_t steps_used = 0;
};

std::map<FunName, SourceFunDef> defs_by_name(const SourceProgram& program);
std::map<FunName, TargetFunDef> defs_by_name(const TargetProgram& program);

// Initial configuration: `wires` anonymous free wires, all |0>.
SrcConfig initial_source_config(const SourceProgram& program, std::size_t wires);

// Initial configuration over the preamble wires, plus the wire -> node map
// the stepper needs for connectivity checks.
std::pair<TgtConfig, std::map<VarName, Qidx>> initial_target_config(
    const TargetProgram& program);

// Depth-first exploration of all measurement branches up to `fuel` total
// steps; deterministic, outcome-1 branch first.
RunReport run_source(const SourceProgram& program, std::size_t wires, std::size_t fuel);
RunReport run_target(const TargetProgram& program, const CouplingGraph& graph,
                     std::size_t fuel);

// ---------------------------------------------------------------------------
// Semantic preservation.
// ---------------------------------------------------------------------------

struct BranchComparison {
  std::string path;
  double source_weight = 0.0;
  double target_weight = 0.0;
  bool weights_match = false;
  bool isomorphic = false;
  // True when the positionally-derived correspondence failed but some other
  // wire permutation matched; reported separately, not as a failure.
  bool needed_fallback_permutation = false;
};

struct PreservationReport {
  std::vector<BranchComparison> branches;
  std::vector<std::string> problems;
  bool structure_mismatch = false;
  bool fuel_exhausted = false;

  bool ok() const { return problems.empty(); }
};

// Runs both programs (source with |X| = |V(G)| wires so the total wire
// counts agree), pairs branches by identical if-outcome sequences, and
// compares terminal unnormalized states via density isomorphism, trying the
// positional correspondence of the returned tuples first.
PreservationReport check_semantic_preservation(const SourceProgram& source,
                                               const TargetProgram& target,
                                               const CouplingGraph& graph, std::size_t fuel,
                                               double tol = 1e-9);

}  // namespace qalloc
