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

#include "qalloc/ast.hpp"

#include <algorithm>

namespace qalloc {

namespace {

template <typename T, typename... Args>
std::shared_ptr<const T> make_expr(typename T::Node node, Span span) {
  auto e = std::make_shared<T>();
  e->node = std::move(node);
  e->span = span;
  return e;
}

}  // namespace

SourceExprPtr src_return(std::vector<VarName> vars, Span span) {
  return make_expr<SourceExpr>(SrcReturn{std::move(vars)}, span);
}
SourceExprPtr src_init(VarName bound, SourceExprPtr body, Span span) {
  return make_expr<SourceExpr>(SrcInitLet{std::move(bound), std::move(body)}, span);
}
SourceExprPtr src_discard(VarName var, SourceExprPtr body, Span span) {
  return make_expr<SourceExpr>(SrcDiscard{std::move(var), std::move(body)}, span);
}
SourceExprPtr src_cnot(std::pair<VarName, VarName> outs, std::pair<VarName, VarName> ins,
                       SourceExprPtr body, Span span) {
  return make_expr<SourceExpr>(SrcCnotLet{std::move(outs), std::move(ins), std::move(body)},
                               span);
}
SourceExprPtr src_h(VarName out, VarName in, SourceExprPtr body, Span span) {
  return make_expr<SourceExpr>(SrcHLet{std::move(out), std::move(in), std::move(body)}, span);
}
SourceExprPtr src_call(std::vector<VarName> outs, FunName fn, std::vector<VarName> args,
                       SourceExprPtr body, Span span) {
  return make_expr<SourceExpr>(
      SrcCallLet{std::move(outs), std::move(fn), std::move(args), std::move(body)}, span);
}
SourceExprPtr src_tuple_let(std::vector<VarName> outs, SourceExprPtr rhs, SourceExprPtr body,
                            Span span) {
  return make_expr<SourceExpr>(SrcTupleLet{std::move(outs), std::move(rhs), std::move(body)},
                               span);
}
SourceExprPtr src_if(VarName cond, SourceExprPtr then_branch, SourceExprPtr else_branch,
                     Span span) {
  return make_expr<SourceExpr>(
      SrcIf{std::move(cond), std::move(then_branch), std::move(else_branch)}, span);
}

TargetExprPtr tgt_return(std::vector<VarName> vars, Span span) {
  return make_expr<TargetExpr>(TgtReturn{std::move(vars)}, span);
}
TargetExprPtr tgt_init(VarName var, TargetExprPtr body, Span span) {
  return make_expr<TargetExpr>(TgtInit{std::move(var), std::move(body)}, span);
}
TargetExprPtr tgt_swap(std::pair<VarName, VarName> outs, std::pair<VarName, VarName> ins,
                       TargetExprPtr body, Span span) {
  return make_expr<TargetExpr>(TgtSwapLet{std::move(outs), std::move(ins), std::move(body)},
                               span);
}
TargetExprPtr tgt_cnot(std::pair<VarName, VarName> outs, std::pair<VarName, VarName> ins,
                       TargetExprPtr body, Span span) {
  return make_expr<TargetExpr>(TgtCnotLet{std::move(outs), std::move(ins), std::move(body)},
                               span);
}
TargetExprPtr tgt_h(VarName out, VarName in, TargetExprPtr body, Span span) {
  return make_expr<TargetExpr>(TgtHLet{std::move(out), std::move(in), std::move(body)}, span);
}
TargetExprPtr tgt_call(std::vector<VarName> outs, FunName fn, std::vector<VarName> args,
                       TargetExprPtr body, Span span) {
  return make_expr<TargetExpr>(
      TgtCallLet{std::move(outs), std::move(fn), std::move(args), std::move(body)}, span);
}
TargetExprPtr tgt_tuple_let(std::vector<VarName> outs, TargetExprPtr rhs, TargetExprPtr body,
                            Span span) {
  return make_expr<TargetExpr>(TgtTupleLet{std::move(outs), std::move(rhs), std::move(body)},
                               span);
}
TargetExprPtr tgt_if(VarName cond, TargetExprPtr then_branch, TargetExprPtr else_branch,
                     Span span) {
  return make_expr<TargetExpr>(
      TgtIf{std::move(cond), std::move(then_branch), std::move(else_branch)}, span);
}

namespace {

bool equal_impl(const SourceExpr& a, const SourceExpr& b);
bool equal_impl(const TargetExpr& a, const TargetExpr& b);

template <typename Ptr>
bool equal_ptr(const Ptr& a, const Ptr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal_impl(*a, *b);
}

bool equal_impl(const SourceExpr& a, const SourceExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, SrcReturn>) {
          return x.vars == y.vars;
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          return x.bound == y.bound && equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          return x.var == y.var && equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, SrcCnotLet>) {
          return x.outs == y.outs && x.ins == y.ins && equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, SrcHLet>) {
          return x.out == y.out && x.in == y.in && equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          return x.outs == y.outs && x.fn == y.fn && x.args == y.args &&
                 equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          return x.outs == y.outs && equal_ptr(x.rhs, y.rhs) && equal_ptr(x.body, y.body);
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          return x.cond == y.cond && equal_ptr(x.then_branch, y.then_branch) &&
                 equal_ptr(x.else_branch, y.else_branch);
        }
      },
      a.node);
}

bool equal_impl(const TargetExpr& a, const TargetExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, TgtReturn>) {
          return x.vars == y.vars;
        } else if constexpr (std::is_same_v<T, TgtInit>) {
          return x.var == y.var && equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, TgtSwapLet>) {
          return x.outs == y.outs && x.ins == y.ins && equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, TgtCnotLet>) {
          return x.outs == y.outs && x.ins == y.ins && equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, TgtHLet>) {
          return x.out == y.out && x.in == y.in && equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, TgtCallLet>) {
          return x.outs == y.outs && x.fn == y.fn && x.args == y.args &&
                 equal_ptr(x.body, y.body);
        } else if constexpr (std::is_same_v<T, TgtTupleLet>) {
          return x.outs == y.outs && equal_ptr(x.rhs, y.rhs) && equal_ptr(x.body, y.body);
        } else {
          static_assert(std::is_same_v<T, TgtIf>);
          return x.cond == y.cond && equal_ptr(x.then_branch, y.then_branch) &&
                 equal_ptr(x.else_branch, y.else_branch);
        }
      },
      a.node);
}

}  // namespace

bool equal(const SourceExprPtr& a, const SourceExprPtr& b) { return equal_ptr(a, b); }
bool equal(const TargetExprPtr& a, const TargetExprPtr& b) { return equal_ptr(a, b); }

bool operator==(const SourceFunType& a, const SourceFunType& b) {
  return a.params == b.params && a.budget == b.budget && a.results == b.results;
}

bool operator==(const TargetFunType& a, const TargetFunType& b) {
  return a.quantified == b.quantified && a.constraints == b.constraints &&
         a.params == b.params && a.results == b.results;
}

void ConstraintSet::add(const Qidx& a, const Qidx& b) {
  if (a == b) {
    throw Error(ErrorKind::WellFormednessViolation,
                "self-loop constraint " + a + " ~ " + b + " is not allowed");
  }
  edges_.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
}

bool ConstraintSet::contains(const Qidx& a, const Qidx& b) const {
  if (a == b) return false;
  return edges_.count(a < b ? std::make_pair(a, b) : std::make_pair(b, a)) > 0;
}

bool ConstraintSet::subset_of(const ConstraintSet& other) const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [&](const auto& e) { return other.edges_.count(e) > 0; });
}

ConstraintSet ConstraintSet::renamed(const std::map<Qidx, Qidx>& subst) const {
  ConstraintSet out;
  for (const auto& [a, b] : edges_) {
    auto ia = subst.find(a);
    auto ib = subst.find(b);
    out.add(ia == subst.end() ? a : ia->second, ib == subst.end() ? b : ib->second);
  }
  return out;
}

std::vector<VarName> env_domain(const SrcTypeEnv& env) {
  std::vector<VarName> out;
  out.reserve(env.size());
  for (const auto& [k, v] : env) out.push_back(k);
  return out;
}

std::vector<VarName> env_domain(const TgtTypeEnv& env) {
  std::vector<VarName> out;
  out.reserve(env.size());
  for (const auto& [k, v] : env) out.push_back(k);
  return out;
}

std::set<Qidx> env_qidxs(const TgtTypeEnv& env) {
  std::set<Qidx> out;
  for (const auto& [k, v] : env) out.insert(v.idx);
  return out;
}

bool equal(const SourceProgram& a, const SourceProgram& b) {
  if (a.defs.size() != b.defs.size()) return false;
  for (std::size_t i = 0; i < a.defs.size(); ++i) {
    const auto& da = a.defs[i];
    const auto& db = b.defs[i];
    if (da.name != db.name || da.params != db.params || !equal(da.body, db.body)) return false;
  }
  return equal(a.entry, b.entry);
}

bool equal(const TargetProgram& a, const TargetProgram& b) {
  if (a.defs.size() != b.defs.size()) return false;
  for (std::size_t i = 0; i < a.defs.size(); ++i) {
    const auto& da = a.defs[i];
    const auto& db = b.defs[i];
    if (da.name != db.name || da.params != db.params || !(da.signature == db.signature) ||
        !equal(da.body, db.body)) {
      return false;
    }
  }
  return a.preamble == b.preamble && equal(a.entry, b.entry);
}

}  // namespace qalloc
