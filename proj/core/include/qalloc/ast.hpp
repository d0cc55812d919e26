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
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "qalloc/errors.hpp"
#include "qalloc/names.hpp"

namespace qalloc {

// ---------------------------------------------------------------------------
// Source language expressions.
//
// All expression values are immutable after construction and shared through
// shared_ptr<const ...>, so subtrees can be reused freely across threads.
// ---------------------------------------------------------------------------

struct SourceExpr;
using SourceExprPtr = std::shared_ptr<const SourceExpr>;

struct SrcReturn {
  std::vector<VarName> vars;
};
struct SrcInitLet {
  VarName bound;
  SourceExprPtr body;
};
struct SrcDiscard {
  VarName var;
  SourceExprPtr body;
};
struct SrcCnotLet {
  std::pair<VarName, VarName> outs;
  std::pair<VarName, VarName> ins;
  SourceExprPtr body;
};
// Single-qubit Hadamard, available behind the frontend's `hadamard` feature
// flag; absent from the default grammar.
struct SrcHLet {
  VarName out;
  VarName in;
  SourceExprPtr body;
};
struct SrcCallLet {
  std::vector<VarName> outs;
  FunName fn;
  std::vector<VarName> args;
  SourceExprPtr body;
};
struct SrcTupleLet {
  std::vector<VarName> outs;
  SourceExprPtr rhs;
  SourceExprPtr body;
};
struct SrcIf {
  VarName cond;
  SourceExprPtr then_branch;
  SourceExprPtr else_branch;
};

struct SourceExpr {
  using Node = std::variant<SrcReturn, SrcInitLet, SrcDiscard, SrcCnotLet, SrcHLet,
                            SrcCallLet, SrcTupleLet, SrcIf>;
  Node node;
  Span span;  // not part of structural equality
};

// Structural equality, ignoring spans.
bool equal(const SourceExprPtr& a, const SourceExprPtr& b);

SourceExprPtr src_return(std::vector<VarName> vars, Span span = {});
SourceExprPtr src_init(VarName bound, SourceExprPtr body, Span span = {});
SourceExprPtr src_discard(VarName var, SourceExprPtr body, Span span = {});
SourceExprPtr src_cnot(std::pair<VarName, VarName> outs, std::pair<VarName, VarName> ins,
                       SourceExprPtr body, Span span = {});
SourceExprPtr src_h(VarName out, VarName in, SourceExprPtr body, Span span = {});
SourceExprPtr src_call(std::vector<VarName> outs, FunName fn, std::vector<VarName> args,
                       SourceExprPtr body, Span span = {});
SourceExprPtr src_tuple_let(std::vector<VarName> outs, SourceExprPtr rhs, SourceExprPtr body,
                            Span span = {});
SourceExprPtr src_if(VarName cond, SourceExprPtr then_branch, SourceExprPtr else_branch,
                     Span span = {});

// ---------------------------------------------------------------------------
// Target language expressions.
//
// `init x` resets an existing statically allocated qubit; it does not bind a
// new variable. Every binder obeys the same distinctness rules as the source.
// ---------------------------------------------------------------------------

struct TargetExpr;
using TargetExprPtr = std::shared_ptr<const TargetExpr>;

struct TgtReturn {
  std::vector<VarName> vars;
};
struct TgtInit {
  VarName var;
  TargetExprPtr body;
};
struct TgtSwapLet {
  std::pair<VarName, VarName> outs;
  std::pair<VarName, VarName> ins;
  TargetExprPtr body;
};
struct TgtCnotLet {
  std::pair<VarName, VarName> outs;
  std::pair<VarName, VarName> ins;
  TargetExprPtr body;
};
struct TgtHLet {
  VarName out;
  VarName in;
  TargetExprPtr body;
};
struct TgtCallLet {
  std::vector<VarName> outs;
  FunName fn;
  std::vector<VarName> args;
  TargetExprPtr body;
};
struct TgtTupleLet {
  std::vector<VarName> outs;
  TargetExprPtr rhs;
  TargetExprPtr body;
};
struct TgtIf {
  VarName cond;
  TargetExprPtr then_branch;
  TargetExprPtr else_branch;
};

struct TargetExpr {
  using Node = std::variant<TgtReturn, TgtInit, TgtSwapLet, TgtCnotLet, TgtHLet, TgtCallLet,
                            TgtTupleLet, TgtIf>;
  Node node;
  Span span;
};

bool equal(const TargetExprPtr& a, const TargetExprPtr& b);

TargetExprPtr tgt_return(std::vector<VarName> vars, Span span = {});
TargetExprPtr tgt_init(VarName var, TargetExprPtr body, Span span = {});
TargetExprPtr tgt_swap(std::pair<VarName, VarName> outs, std::pair<VarName, VarName> ins,
                       TargetExprPtr body, Span span = {});
TargetExprPtr tgt_cnot(std::pair<VarName, VarName> outs, std::pair<VarName, VarName> ins,
                       TargetExprPtr body, Span span = {});
TargetExprPtr tgt_h(VarName out, VarName in, TargetExprPtr body, Span span = {});
TargetExprPtr tgt_call(std::vector<VarName> outs, FunName fn, std::vector<VarName> args,
                       TargetExprPtr body, Span span = {});
TargetExprPtr tgt_tuple_let(std::vector<VarName> outs, TargetExprPtr rhs, TargetExprPtr body,
                            Span span = {});
TargetExprPtr tgt_if(VarName cond, TargetExprPtr then_branch, TargetExprPtr else_branch,
                     Span span = {});

// ---------------------------------------------------------------------------
// Types.
// ---------------------------------------------------------------------------

enum class SimpleType { Qbit };

using TupleType = std::vector<SimpleType>;

// T1 --N--> T2: the function consumes params, creates at most `budget` qubits
// internally, and returns `results`.
struct SourceFunType {
  TupleType params;
  int budget = 0;
  TupleType results;
};

bool operator==(const SourceFunType& a, const SourceFunType& b);

// q(alpha): the qubit residing at coupling-graph node alpha.
struct QType {
  Qidx idx;
};
inline bool operator==(const QType& a, const QType& b) { return a.idx == b.idx; }
inline bool operator!=(const QType& a, const QType& b) { return !(a == b); }

using TgtTupleType = std::vector<QType>;

// Unordered adjacency requirements between qidxs. Pairs are stored with the
// smaller name first so structural equality coincides with semantic equality.
class ConstraintSet {
 public:
  ConstraintSet() = default;

  // Throws Error(WellFormednessViolation) on a self-loop.
  void add(const Qidx& a, const Qidx& b);
  bool contains(const Qidx& a, const Qidx& b) const;
  bool subset_of(const ConstraintSet& other) const;
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  const std::set<std::pair<Qidx, Qidx>>& pairs() const { return edges_; }

  ConstraintSet renamed(const std::map<Qidx, Qidx>& subst) const;

  friend bool operator==(const ConstraintSet& a, const ConstraintSet& b) {
    return a.edges_ == b.edges_;
  }

 private:
  std::set<std::pair<Qidx, Qidx>> edges_;
};

// forall quantified. constraints => params -> results.
// Every qidx mentioned in constraints/params/results must be quantified, and
// every quantified qidx must occur in the parameter types (this is what makes
// call-site instantiation a deterministic first-order matching problem).
struct TargetFunType {
  std::vector<Qidx> quantified;
  ConstraintSet constraints;
  TgtTupleType params;
  TgtTupleType results;
};

bool operator==(const TargetFunType& a, const TargetFunType& b);

// ---------------------------------------------------------------------------
// Environments.  Keys are pairwise distinct; std::map keeps them ordered by
// name, which the checkers and the allocator rely on for determinism.
// ---------------------------------------------------------------------------

using SrcTypeEnv = std::map<VarName, SimpleType>;
using TgtTypeEnv = std::map<VarName, QType>;
using SrcFunEnv = std::map<FunName, SourceFunType>;
using TgtFunEnv = std::map<FunName, TargetFunType>;

std::vector<VarName> env_domain(const SrcTypeEnv& env);
std::vector<VarName> env_domain(const TgtTypeEnv& env);

// Set of qidxs used by a target environment (QV(Γ)).
std::set<Qidx> env_qidxs(const TgtTypeEnv& env);

// ---------------------------------------------------------------------------
// Programs.
// ---------------------------------------------------------------------------

struct SourceFunDef {
  FunName name;
  std::vector<VarName> params;
  SourceExprPtr body;
  Span span;
};

struct SourceProgram {
  std::vector<SourceFunDef> defs;
  SourceExprPtr entry;
};

bool equal(const SourceProgram& a, const SourceProgram& b);

struct TargetFunDef {
  FunName name;
  std::vector<VarName> params;
  TargetFunType signature;
  TargetExprPtr body;
  Span span;
};

struct TargetProgram {
  std::vector<TargetFunDef> defs;
  // The `qubits:` preamble of main: Γ of the whole-program judgment, mapping
  // each live variable to the coupling-graph node it occupies at entry.
  std::vector<std::pair<VarName, Qidx>> preamble;
  TargetExprPtr entry;
};

bool equal(const TargetProgram& a, const TargetProgram& b);

// A sequence of adjacent transpositions, applied left to right.
using SwapSequence = std::vector<std::pair<Qidx, Qidx>>;

}  // namespace qalloc
