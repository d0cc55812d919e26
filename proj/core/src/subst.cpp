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

#include "qalloc/subst.hpp"

#include <algorithm>

namespace qalloc {

namespace {

VarName lookup(const VarSubst& subst, const VarName& v) {
  auto it = subst.find(v);
  return it == subst.end() ? v : it->second;
}

// Removes shadowed keys and, depending on mode, either rejects or schedules
// an alpha-rename for binders that collide with an active renaming target.
struct BinderPolicy {
  bool avoid_capture = false;  // false: throw CaptureError; true: rename
  FreshNames* fresh = nullptr;
};

// Returns the substitution active below a binder group, plus the renaming to
// apply to the binders themselves (empty unless avoiding capture).
std::pair<VarSubst, VarSubst> enter_binders(const VarSubst& subst,
                                            const std::vector<VarName>& binders,
                                            const BinderPolicy& policy, Span span) {
  VarSubst active;
  for (const auto& [k, v] : subst) {
    if (std::find(binders.begin(), binders.end(), k) == binders.end()) active.emplace(k, v);
  }
  VarSubst binder_renames;
  for (const auto& b : binders) {
    bool collides = std::any_of(active.begin(), active.end(),
                                [&](const auto& kv) { return kv.second == b; });
    if (!collides) continue;
    if (!policy.avoid_capture) {
      throw Error(ErrorKind::CaptureError,
                  "renaming target '" + b + "' collides with a binder in scope", span);
    }
    binder_renames.emplace(b, policy.fresh->rename());
  }
  for (const auto& [k, v] : binder_renames) active.emplace(k, v);
  return {std::move(active), std::move(binder_renames)};
}

VarName rename_binder(const VarSubst& renames, const VarName& b) { return lookup(renames, b); }

SourceExprPtr subst_src(const VarSubst& subst, const SourceExprPtr& expr,
                        const BinderPolicy& policy) {
  if (subst.empty()) return expr;
  const Span span = expr->span;
  return std::visit(
      [&](const auto& n) -> SourceExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          std::vector<VarName> vars;
          vars.reserve(n.vars.size());
          for (const auto& v : n.vars) vars.push_back(lookup(subst, v));
          return src_return(std::move(vars), span);
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          auto [active, renames] = enter_binders(subst, {n.bound}, policy, span);
          return src_init(rename_binder(renames, n.bound), subst_src(active, n.body, policy),
                          span);
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          return src_discard(lookup(subst, n.var), subst_src(subst, n.body, policy), span);
        } else if constexpr (std::is_same_v<T, SrcCnotLet>) {
          auto [active, renames] =
              enter_binders(subst, {n.outs.first, n.outs.second}, policy, span);
          return src_cnot({rename_binder(renames, n.outs.first),
                           rename_binder(renames, n.outs.second)},
                          {lookup(subst, n.ins.first), lookup(subst, n.ins.second)},
                          subst_src(active, n.body, policy), span);
        } else if constexpr (std::is_same_v<T, SrcHLet>) {
          auto [active, renames] = enter_binders(subst, {n.out}, policy, span);
          return src_h(rename_binder(renames, n.out), lookup(subst, n.in),
                       subst_src(active, n.body, policy), span);
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          std::vector<VarName> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(lookup(subst, a));
          auto [active, renames] = enter_binders(subst, n.outs, policy, span);
          std::vector<VarName> outs;
          outs.reserve(n.outs.size());
          for (const auto& o : n.outs) outs.push_back(rename_binder(renames, o));
          return src_call(std::move(outs), n.fn, std::move(args),
                          subst_src(active, n.body, policy), span);
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          auto rhs = subst_src(subst, n.rhs, policy);
          auto [active, renames] = enter_binders(subst, n.outs, policy, span);
          std::vector<VarName> outs;
          outs.reserve(n.outs.size());
          for (const auto& o : n.outs) outs.push_back(rename_binder(renames, o));
          return src_tuple_let(std::move(outs), std::move(rhs),
                               subst_src(active, n.body, policy), span);
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          return src_if(lookup(subst, n.cond), subst_src(subst, n.then_branch, policy),
                        subst_src(subst, n.else_branch, policy), span);
        }
      },
      expr->node);
}

TargetExprPtr subst_tgt(const VarSubst& subst, const TargetExprPtr& expr,
                        const BinderPolicy& policy) {
  if (subst.empty()) return expr;
  const Span span = expr->span;
  return std::visit(
      [&](const auto& n) -> TargetExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TgtReturn>) {
          std::vector<VarName> vars;
          vars.reserve(n.vars.size());
          for (const auto& v : n.vars) vars.push_back(lookup(subst, v));
          return tgt_return(std::move(vars), span);
        } else if constexpr (std::is_same_v<T, TgtInit>) {
          // init resets an existing variable; it is a use, not a binder.
          return tgt_init(lookup(subst, n.var), subst_tgt(subst, n.body, policy), span);
        } else if constexpr (std::is_same_v<T, TgtSwapLet> ||
                             std::is_same_v<T, TgtCnotLet>) {
          auto [active, renames] =
              enter_binders(subst, {n.outs.first, n.outs.second}, policy, span);
          std::pair<VarName, VarName> outs{rename_binder(renames, n.outs.first),
                                           rename_binder(renames, n.outs.second)};
          std::pair<VarName, VarName> ins{lookup(subst, n.ins.first),
                                          lookup(subst, n.ins.second)};
          auto body = subst_tgt(active, n.body, policy);
          if constexpr (std::is_same_v<T, TgtSwapLet>) {
            return tgt_swap(std::move(outs), std::move(ins), std::move(body), span);
          } else {
            return tgt_cnot(std::move(outs), std::move(ins), std::move(body), span);
          }
        } else if constexpr (std::is_same_v<T, TgtHLet>) {
          auto [active, renames] = enter_binders(subst, {n.out}, policy, span);
          return tgt_h(rename_binder(renames, n.out), lookup(subst, n.in),
                       subst_tgt(active, n.body, policy), span);
        } else if constexpr (std::is_same_v<T, TgtCallLet>) {
          std::vector<VarName> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(lookup(subst, a));
          auto [active, renames] = enter_binders(subst, n.outs, policy, span);
          std::vector<VarName> outs;
          outs.reserve(n.outs.size());
          for (const auto& o : n.outs) outs.push_back(rename_binder(renames, o));
          return tgt_call(std::move(outs), n.fn, std::move(args),
                          subst_tgt(active, n.body, policy), span);
        } else if constexpr (std::is_same_v<T, TgtTupleLet>) {
          auto rhs = subst_tgt(subst, n.rhs, policy);
          auto [active, renames] = enter_binders(subst, n.outs, policy, span);
          std::vector<VarName> outs;
          outs.reserve(n.outs.size());
          for (const auto& o : n.outs) outs.push_back(rename_binder(renames, o));
          return tgt_tuple_let(std::move(outs), std::move(rhs),
                               subst_tgt(active, n.body, policy), span);
        } else {
          static_assert(std::is_same_v<T, TgtIf>);
          return tgt_if(lookup(subst, n.cond), subst_tgt(subst, n.then_branch, policy),
                        subst_tgt(subst, n.else_branch, policy), span);
        }
      },
      expr->node);
}

void collect_free_src(const SourceExprPtr& expr, std::set<VarName>& bound,
                      std::set<VarName>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        auto use = [&](const VarName& v) {
          if (!bound.count(v)) out.insert(v);
        };
        auto with_binders = [&](const std::vector<VarName>& bs, const SourceExprPtr& body) {
          std::vector<VarName> added;
          for (const auto& b : bs) {
            if (bound.insert(b).second) added.push_back(b);
          }
          collect_free_src(body, bound, out);
          for (const auto& b : added) bound.erase(b);
        };
        if constexpr (std::is_same_v<T, SrcReturn>) {
          for (const auto& v : n.vars) use(v);
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          with_binders({n.bound}, n.body);
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          use(n.var);
          collect_free_src(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, SrcCnotLet>) {
          use(n.ins.first);
          use(n.ins.second);
          with_binders({n.outs.first, n.outs.second}, n.body);
        } else if constexpr (std::is_same_v<T, SrcHLet>) {
          use(n.in);
          with_binders({n.out}, n.body);
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          for (const auto& a : n.args) use(a);
          with_binders(n.outs, n.body);
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          collect_free_src(n.rhs, bound, out);
          with_binders(n.outs, n.body);
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          use(n.cond);
          collect_free_src(n.then_branch, bound, out);
          collect_free_src(n.else_branch, bound, out);
        }
      },
      expr->node);
}

void collect_free_tgt(const TargetExprPtr& expr, std::set<VarName>& bound,
                      std::set<VarName>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        auto use = [&](const VarName& v) {
          if (!bound.count(v)) out.insert(v);
        };
        auto with_binders = [&](const std::vector<VarName>& bs, const TargetExprPtr& body) {
          std::vector<VarName> added;
          for (const auto& b : bs) {
            if (bound.insert(b).second) added.push_back(b);
          }
          collect_free_tgt(body, bound, out);
          for (const auto& b : added) bound.erase(b);
        };
        if constexpr (std::is_same_v<T, TgtReturn>) {
          for (const auto& v : n.vars) use(v);
        } else if constexpr (std::is_same_v<T, TgtInit>) {
          use(n.var);
          collect_free_tgt(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, TgtSwapLet> || std::is_same_v<T, TgtCnotLet>) {
          use(n.ins.first);
          use(n.ins.second);
          with_binders({n.outs.first, n.outs.second}, n.body);
        } else if constexpr (std::is_same_v<T, TgtHLet>) {
          use(n.in);
          with_binders({n.out}, n.body);
        } else if constexpr (std::is_same_v<T, TgtCallLet>) {
          for (const auto& a : n.args) use(a);
          with_binders(n.outs, n.body);
        } else if constexpr (std::is_same_v<T, TgtTupleLet>) {
          collect_free_tgt(n.rhs, bound, out);
          with_binders(n.outs, n.body);
        } else {
          static_assert(std::is_same_v<T, TgtIf>);
          use(n.cond);
          collect_free_tgt(n.then_branch, bound, out);
          collect_free_tgt(n.else_branch, bound, out);
        }
      },
      expr->node);
}

void collect_binders_src(const SourceExprPtr& expr, std::set<VarName>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          out.insert(n.bound);
          collect_binders_src(n.body, out);
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          collect_binders_src(n.body, out);
        } else if constexpr (std::is_same_v<T, SrcCnotLet>) {
          out.insert(n.outs.first);
          out.insert(n.outs.second);
          collect_binders_src(n.body, out);
        } else if constexpr (std::is_same_v<T, SrcHLet>) {
          out.insert(n.out);
          collect_binders_src(n.body, out);
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          out.insert(n.outs.begin(), n.outs.end());
          collect_binders_src(n.body, out);
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          out.insert(n.outs.begin(), n.outs.end());
          collect_binders_src(n.rhs, out);
          collect_binders_src(n.body, out);
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          collect_binders_src(n.then_branch, out);
          collect_binders_src(n.else_branch, out);
        }
      },
      expr->node);
}

}  // namespace

SourceExprPtr apply_var_subst(const VarSubst& subst, const SourceExprPtr& expr) {
  return subst_src(subst, expr, BinderPolicy{});
}

TargetExprPtr apply_var_subst(const VarSubst& subst, const TargetExprPtr& expr) {
  return subst_tgt(subst, expr, BinderPolicy{});
}

SourceExprPtr substitute_avoiding(const VarSubst& subst, const SourceExprPtr& expr,
                                  FreshNames& fresh) {
  return subst_src(subst, expr, BinderPolicy{true, &fresh});
}

TargetExprPtr substitute_avoiding(const VarSubst& subst, const TargetExprPtr& expr,
                                  FreshNames& fresh) {
  return subst_tgt(subst, expr, BinderPolicy{true, &fresh});
}

std::set<VarName> free_vars(const SourceExprPtr& expr) {
  std::set<VarName> bound, out;
  collect_free_src(expr, bound, out);
  return out;
}

std::set<VarName> free_vars(const TargetExprPtr& expr) {
  std::set<VarName> bound, out;
  collect_free_tgt(expr, bound, out);
  return out;
}

std::set<VarName> binder_names(const SourceExprPtr& expr) {
  std::set<VarName> out;
  collect_binders_src(expr, out);
  return out;
}

SourceExprPtr alpha_rename_binders(const SourceExprPtr& expr, const VarName& name,
                                   FreshNames& fresh) {
  const Span span = expr->span;
  auto rename_group = [&](std::vector<VarName> binders,
                          const SourceExprPtr& body) -> std::pair<std::vector<VarName>, SourceExprPtr> {
    // Clean deeper binders of the same name first, then this group.
    auto body2 = alpha_rename_binders(body, name, fresh);
    bool hit = false;
    VarName replacement;
    for (auto& b : binders) {
      if (b == name) {
        replacement = fresh.var();
        b = replacement;
        hit = true;
        break;  // binder groups have pairwise distinct names
      }
    }
    if (hit) body2 = apply_var_subst(VarSubst{{name, replacement}}, body2);
    return {std::move(binders), std::move(body2)};
  };
  return std::visit(
      [&](const auto& n) -> SourceExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          return expr;
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          auto [bs, body] = rename_group({n.bound}, n.body);
          return src_init(bs[0], std::move(body), span);
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          return src_discard(n.var, alpha_rename_binders(n.body, name, fresh), span);
        } else if constexpr (std::is_same_v<T, SrcCnotLet>) {
          auto [bs, body] = rename_group({n.outs.first, n.outs.second}, n.body);
          return src_cnot({bs[0], bs[1]}, n.ins, std::move(body), span);
        } else if constexpr (std::is_same_v<T, SrcHLet>) {
          auto [bs, body] = rename_group({n.out}, n.body);
          return src_h(bs[0], n.in, std::move(body), span);
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          auto [bs, body] = rename_group(n.outs, n.body);
          return src_call(std::move(bs), n.fn, n.args, std::move(body), span);
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          auto rhs = alpha_rename_binders(n.rhs, name, fresh);
          auto [bs, body] = rename_group(n.outs, n.body);
          return src_tuple_let(std::move(bs), std::move(rhs), std::move(body), span);
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          return src_if(n.cond, alpha_rename_binders(n.then_branch, name, fresh),
                        alpha_rename_binders(n.else_branch, name, fresh), span);
        }
      },
      expr->node);
}

TgtTypeEnv apply_swaps_to_env(const SwapSequence& psi, const TgtTypeEnv& gamma) {
  TgtTypeEnv env = gamma;
  for (const auto& [a, b] : psi) {
    TgtTypeEnv::iterator at = env.end(), bt = env.end();
    for (auto it = env.begin(); it != env.end(); ++it) {
      if (it->second.idx == a && at == env.end()) at = it;
      if (it->second.idx == b && bt == env.end()) bt = it;
    }
    if (at != env.end() && bt != env.end()) {
      std::swap(at->second, bt->second);
    } else if (at != env.end()) {
      at->second = QType{b};
    } else if (bt != env.end()) {
      bt->second = QType{a};
    }
  }
  return env;
}

}  // namespace qalloc
