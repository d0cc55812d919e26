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

#include "qalloc/alloc.hpp"

#include <algorithm>
#include <sstream>

#include "qalloc/check_target.hpp"
#include "qalloc/graph_algos.hpp"
#include "qalloc/subst.hpp"

namespace qalloc {

namespace {

[[noreturn]] void internal(const std::string& what, Span span = {}) {
  throw Error(ErrorKind::InternalPostconditionViolation, "allocator invariant broken: " + what,
              span);
}

struct AllocCtx {
  TgtFunEnv theta;
  // Workspace nodes of each function, in signature order: the i-th
  // quantified qidx of the signature stands for fn_nodes[f][i]. Because all
  // workspaces come from one subgraph chain, this doubles as the (identity)
  // embedding of a callee workspace into any caller's.
  std::map<FunName, std::vector<Qidx>> fn_nodes;
  FreshNames fresh;
  AllocTrace trace;
};

struct ExprState {
  CouplingGraph workspace;  // constant per function / main
  TgtTypeEnv gamma1;        // live qubits
  TgtTypeEnv gamma2;        // free qubits, always in state |0>
  std::optional<std::vector<Qidx>> expected_return;
  std::string owner;
  std::string path;
};

struct Allocated {
  TargetExprPtr expr;
  std::vector<Qidx> type;  // qidx per tuple position
};

TgtTypeEnv env_union(const TgtTypeEnv& a, const TgtTypeEnv& b) {
  TgtTypeEnv out = a;
  for (const auto& [k, v] : b) {
    if (!out.emplace(k, v).second) internal("live and free environments overlap at " + k);
  }
  return out;
}

Qidx qidx_of(const TgtTypeEnv& env, const VarName& v, const char* what) {
  auto it = env.find(v);
  if (it == env.end()) internal(std::string(what) + " variable '" + v + "' missing");
  return it->second.idx;
}

std::vector<VarName> sorted_domain(const TgtTypeEnv& env) { return env_domain(env); }

Allocated alloc_expr(const SourceExprPtr& expr, AllocCtx& ctx, ExprState state);

Allocated alloc_return(const SrcReturn& node, AllocCtx& ctx, ExprState& state, Span span) {
  std::vector<VarName> padded = node.vars;
  for (const auto& v : sorted_domain(state.gamma2)) padded.push_back(v);
  std::vector<Qidx> betas;
  betas.reserve(padded.size());
  for (std::size_t i = 0; i < padded.size(); ++i) {
    const auto& env = i < node.vars.size() ? state.gamma1 : state.gamma2;
    betas.push_back(qidx_of(env, padded[i], "returned"));
  }
  SwapSequence psi;
  std::vector<Qidx> type = betas;
  if (state.expected_return) {
    const std::vector<Qidx>& alphas = *state.expected_return;
    if (alphas.size() != padded.size()) {
      internal("return layout has " + std::to_string(alphas.size()) + " slots for " +
               std::to_string(padded.size()) + " qubits", span);
    }
    TokenMap wanted;
    for (std::size_t i = 0; i < padded.size(); ++i) wanted[betas[i]] = alphas[i];
    psi = token_swapping_approx(state.workspace, wanted);
    type = alphas;
  }
  ctx.trace.returns.push_back({state.owner, state.path, node.vars, padded});
  TgtTypeEnv env = env_union(state.gamma1, state.gamma2);
  return {insert_swaps(tgt_return(padded, span), env, psi), std::move(type)};
}

Allocated alloc_init(const SrcInitLet& node, AllocCtx& ctx, ExprState& state, Span span) {
  if (state.gamma2.empty()) internal("init with no free qubit available", span);
  auto chosen = state.gamma2.begin();  // smallest name
  VarName fresh_var = chosen->first;
  QType at = chosen->second;
  state.gamma2.erase(chosen);
  state.gamma1.emplace(fresh_var, at);
  // In the target the qubit already exists (in |0>), so no instruction is
  // emitted; the continuation simply adopts the free variable's name.
  SourceExprPtr body = node.bound == fresh_var
                           ? node.body
                           : apply_var_subst(VarSubst{{node.bound, fresh_var}}, node.body);
  return alloc_expr(body, ctx, std::move(state));
}

Allocated alloc_discard(const SrcDiscard& node, AllocCtx& ctx, ExprState& state, Span span) {
  auto it = state.gamma1.find(node.var);
  if (it == state.gamma1.end()) internal("discard of unknown variable " + node.var, span);
  QType at = it->second;
  state.gamma1.erase(it);
  SourceExprPtr body = node.body;
  // The parked name joins the free pool; if the continuation ever rebinds
  // it, alpha-rename those binders so the pool name stays unambiguous.
  if (binder_names(body).count(node.var)) {
    body = alpha_rename_binders(body, node.var, ctx.fresh);
  }
  state.gamma2.emplace(node.var, at);
  Allocated rest = alloc_expr(body, ctx, std::move(state));
  return {tgt_init(node.var, rest.expr, span), std::move(rest.type)};
}

Allocated alloc_cnot(const SrcCnotLet& node, AllocCtx& ctx, ExprState& state, Span span) {
  const Qidx a1 = qidx_of(state.gamma1, node.ins.first, "cnot control");
  const Qidx a2 = qidx_of(state.gamma1, node.ins.second, "cnot target");
  std::vector<Qidx> route = shortest_path(state.workspace, a1, a2);
  SwapSequence psi;
  for (std::size_t i = 0; i + 2 < route.size(); ++i) psi.emplace_back(route[i], route[i + 1]);

  TgtTypeEnv before = env_union(state.gamma1, state.gamma2);
  TgtTypeEnv renamed = state.gamma1;
  QType t1 = renamed.at(node.ins.first);
  QType t2 = renamed.at(node.ins.second);
  renamed.erase(node.ins.first);
  renamed.erase(node.ins.second);
  renamed.emplace(node.outs.first, t1);
  renamed.emplace(node.outs.second, t2);

  state.gamma1 = apply_swaps_to_env(psi, renamed);
  state.gamma2 = apply_swaps_to_env(psi, state.gamma2);
  Allocated rest = alloc_expr(node.body, ctx, std::move(state));
  TargetExprPtr inner = tgt_cnot(node.outs, node.ins, rest.expr, span);
  return {insert_swaps(inner, before, psi), std::move(rest.type)};
}

Allocated alloc_h(const SrcHLet& node, AllocCtx& ctx, ExprState& state, Span span) {
  QType at = state.gamma1.at(node.in);
  state.gamma1.erase(node.in);
  state.gamma1.emplace(node.out, at);
  Allocated rest = alloc_expr(node.body, ctx, std::move(state));
  return {tgt_h(node.out, node.in, rest.expr, span), std::move(rest.type)};
}

Allocated alloc_call(const SrcCallLet& node, AllocCtx& ctx, ExprState& state, Span span) {
  auto sig_it = ctx.theta.find(node.fn);
  if (sig_it == ctx.theta.end()) internal("call to unallocated function " + node.fn, span);
  const TargetFunType& sig = sig_it->second;
  const std::vector<Qidx>& host = ctx.fn_nodes.at(node.fn);
  const std::size_t k = sig.params.size();
  const std::size_t m = node.args.size();
  const std::size_t n = node.outs.size();
  if (host.size() != k || m > k || n > k) internal("call shape mismatch for " + node.fn, span);

  // Pad the argument list with free qubits, then move argument i onto the
  // callee's i-th workspace node. The embedded workspace is literally a
  // subset of ours (chain nesting), so the embedding is the identity on
  // node names.
  std::vector<VarName> ys = node.args;
  {
    auto free_names = sorted_domain(state.gamma2);
    if (free_names.size() < k - m) internal("not enough free qubits to call " + node.fn, span);
    ys.insert(ys.end(), free_names.begin(), free_names.begin() + (k - m));
  }
  TokenMap wanted;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& env = i < m ? state.gamma1 : state.gamma2;
    if (!state.workspace.has_node(host[i])) {
      internal("callee workspace node " + host[i] + " outside caller workspace", span);
    }
    wanted[qidx_of(env, ys[i], "call argument")] = host[i];
  }
  SwapSequence psi = token_swapping_approx(state.workspace, wanted);

  QidxSubst sigma;
  for (std::size_t i = 0; i < sig.quantified.size(); ++i) sigma[sig.quantified[i]] = host[i];
  std::vector<Qidx> result_nodes;
  result_nodes.reserve(sig.results.size());
  for (const auto& r : sig.results) result_nodes.push_back(sigma.at(r.idx));

  std::vector<VarName> all_outs = node.outs;
  for (std::size_t j = n; j < k; ++j) all_outs.push_back(ctx.fresh.var());

  TgtTypeEnv before = env_union(state.gamma1, state.gamma2);
  state.gamma1 = apply_swaps_to_env(psi, state.gamma1);
  state.gamma2 = apply_swaps_to_env(psi, state.gamma2);
  for (std::size_t i = 0; i < m; ++i) state.gamma1.erase(ys[i]);
  for (std::size_t i = m; i < k; ++i) state.gamma2.erase(ys[i]);
  for (std::size_t i = 0; i < n; ++i) {
    state.gamma1.emplace(all_outs[i], QType{result_nodes[i]});
  }
  for (std::size_t i = n; i < k; ++i) {
    state.gamma2.emplace(all_outs[i], QType{result_nodes[i]});
  }

  Allocated rest = alloc_expr(node.body, ctx, std::move(state));
  TargetExprPtr inner = tgt_call(all_outs, node.fn, ys, rest.expr, span);
  return {insert_swaps(inner, before, psi), std::move(rest.type)};
}

std::set<FunName> called_functions(const SourceExprPtr& e) {
  std::set<FunName> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          out.insert(n.fn);
          for (const auto& f : called_functions(n.body)) out.insert(f);
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          for (const auto& f : called_functions(n.rhs)) out.insert(f);
          for (const auto& f : called_functions(n.body)) out.insert(f);
        } else if constexpr (std::is_same_v<T, SrcIf>) {
          for (const auto& f : called_functions(n.then_branch)) out.insert(f);
          for (const auto& f : called_functions(n.else_branch)) out.insert(f);
        } else {
          for (const auto& f : called_functions(n.body)) out.insert(f);
        }
      },
      e->node);
  return out;
}

// Assignment of the right-hand side's qubits onto a connected region:
// qidxs already inside the region stay put, the rest greedily take the
// nearest free region node.
TokenMap region_assignment(const CouplingGraph& workspace, const std::set<Qidx>& current,
                           const std::vector<Qidx>& region) {
  std::set<Qidx> region_set(region.begin(), region.end());
  std::set<Qidx> slots = region_set;
  std::vector<Qidx> pending;
  TokenMap wanted;
  for (const auto& q : current) {
    if (slots.count(q)) {
      wanted[q] = q;
      slots.erase(q);
    } else {
      pending.push_back(q);
    }
  }
  for (const auto& q : pending) {
    Qidx best;
    int best_dist = -1;
    for (const auto& s : slots) {
      int d = bfs_distance(workspace, q, s);
      if (best_dist < 0 || (d >= 0 && d < best_dist)) {
        best = s;
        best_dist = d;
      }
    }
    wanted[q] = best;
    slots.erase(best);
  }
  return wanted;
}

Allocated alloc_tuple_let(const SrcTupleLet& node, AllocCtx& ctx, ExprState& state,
                          Span span) {
  std::set<VarName> fv = free_vars(node.rhs);
  TgtTypeEnv rhs_live, rest_live;
  for (const auto& [v, t] : state.gamma1) {
    (fv.count(v) ? rhs_live : rest_live).emplace(v, t);
  }

  // The right-hand side is typed under rhs_live ∪ gamma2 only, so its swaps
  // may touch exactly those qidxs. They must induce a connected region of
  // the workspace, and if the right-hand side calls functions, the region
  // must contain every callee workspace. A chain element of the current
  // workspace has both properties (chain construction is memoryless, so the
  // chain of a chain element is a prefix of the device chain, and callee
  // workspaces are themselves smaller chain elements). Herd the qubits onto
  // it unless the current placement already qualifies.
  std::set<Qidx> rhs_qidxs = env_qidxs(rhs_live);
  for (const auto& q : env_qidxs(state.gamma2)) rhs_qidxs.insert(q);
  SwapSequence pre;
  TgtTypeEnv before = env_union(state.gamma1, state.gamma2);
  CouplingGraph region = state.workspace.induced(rhs_qidxs);
  bool region_ok;
  if (rhs_qidxs.empty()) {
    region_ok = true;
  } else if (called_functions(node.rhs).empty()) {
    region_ok = region.is_connected();
  } else {
    SubgraphChain chain = construct_subgraphs(state.workspace);
    const CouplingGraph& element = chain.at_size(rhs_qidxs.size());
    region_ok = std::set<Qidx>(element.nodes().begin(), element.nodes().end()) == rhs_qidxs;
  }
  if (!region_ok) {
    SubgraphChain chain = construct_subgraphs(state.workspace);
    const CouplingGraph& target_region = chain.at_size(rhs_qidxs.size());
    TokenMap wanted =
        region_assignment(state.workspace, rhs_qidxs, target_region.nodes());
    pre = token_swapping_approx(state.workspace, wanted);
    state.gamma1 = apply_swaps_to_env(pre, state.gamma1);
    state.gamma2 = apply_swaps_to_env(pre, state.gamma2);
    rhs_live = apply_swaps_to_env(pre, rhs_live);
    rest_live.clear();
    for (const auto& [v, t] : state.gamma1) {
      if (!fv.count(v)) rest_live.emplace(v, t);
    }
    region = target_region;
  }

  ExprState rhs_state;
  rhs_state.workspace = region;
  rhs_state.gamma1 = rhs_live;
  rhs_state.gamma2 = state.gamma2;
  rhs_state.expected_return = std::nullopt;
  rhs_state.owner = state.owner;
  rhs_state.path = state.path;
  Allocated rhs = alloc_expr(node.rhs, ctx, std::move(rhs_state));

  const std::size_t n = node.outs.size();
  if (rhs.type.size() < n) internal("let right-hand side returns too few values", span);
  std::vector<VarName> all_outs = node.outs;
  for (std::size_t j = n; j < rhs.type.size(); ++j) all_outs.push_back(ctx.fresh.var());

  state.gamma1 = rest_live;
  state.gamma2.clear();
  for (std::size_t i = 0; i < rhs.type.size(); ++i) {
    auto& env = i < n ? state.gamma1 : state.gamma2;
    env.emplace(all_outs[i], QType{rhs.type[i]});
  }
  Allocated body = alloc_expr(node.body, ctx, std::move(state));
  TargetExprPtr let = tgt_tuple_let(all_outs, rhs.expr, body.expr, span);
  return {insert_swaps(let, before, pre), std::move(body.type)};
}

Allocated alloc_if(const SrcIf& node, AllocCtx& ctx, ExprState& state, Span span) {
  if (!state.gamma1.count(node.cond)) internal("if condition not live: " + node.cond, span);
  // Both branches must produce one tuple type, so pin a return layout for
  // every leaf below this point if none is pinned yet.
  std::vector<Qidx> pin;
  if (state.expected_return) {
    pin = *state.expected_return;
  } else {
    std::set<Qidx> all = env_qidxs(state.gamma1);
    for (const auto& q : env_qidxs(state.gamma2)) all.insert(q);
    pin.assign(all.begin(), all.end());
  }
  ExprState then_state = state;
  then_state.expected_return = pin;
  then_state.path = state.path + "T";
  Allocated then_alloc = alloc_expr(node.then_branch, ctx, std::move(then_state));
  ExprState else_state = state;
  else_state.expected_return = pin;
  else_state.path = state.path + "E";
  Allocated else_alloc = alloc_expr(node.else_branch, ctx, std::move(else_state));
  if (then_alloc.type != else_alloc.type) internal("if branches diverged in type", span);
  return {tgt_if(node.cond, then_alloc.expr, else_alloc.expr, span),
          std::move(then_alloc.type)};
}

Allocated alloc_expr(const SourceExprPtr& expr, AllocCtx& ctx, ExprState state) {
  const Span span = expr->span;
  return std::visit(
      [&](const auto& node) -> Allocated {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          return alloc_return(node, ctx, state, span);
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          return alloc_init(node, ctx, state, span);
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          return alloc_discard(node, ctx, state, span);
        } else if constexpr (std::is_same_v<T, SrcCnotLet>) {
          return alloc_cnot(node, ctx, state, span);
        } else if constexpr (std::is_same_v<T, SrcHLet>) {
          return alloc_h(node, ctx, state, span);
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          return alloc_call(node, ctx, state, span);
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          return alloc_tuple_let(node, ctx, state, span);
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          return alloc_if(node, ctx, state, span);
        }
      },
      expr->node);
}

std::vector<Qidx> canonical_qidxs(std::size_t k) {
  std::vector<Qidx> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back("a" + std::to_string(i + 1));
  return out;
}

TargetFunDef alloc_fundef(const SourceFunDef& def, const SourceFunType& src_sig,
                          const CouplingGraph& assigned, AllocCtx& ctx) {
  const std::size_t n = def.params.size();
  const std::size_t k = n + static_cast<std::size_t>(src_sig.budget);
  std::vector<Qidx> ws_nodes(assigned.nodes().begin(),
                             assigned.nodes().begin() + static_cast<std::ptrdiff_t>(k));
  std::set<Qidx> ws_set(ws_nodes.begin(), ws_nodes.end());
  CouplingGraph workspace = assigned.induced(ws_set);

  // The emitted signature quantifies canonical names a1..ak standing for
  // the workspace nodes; the function consumes and returns its whole
  // workspace, padding included.
  std::vector<Qidx> quantified = canonical_qidxs(k);
  QidxSubst to_canonical;
  for (std::size_t i = 0; i < k; ++i) to_canonical[ws_nodes[i]] = quantified[i];
  TargetFunType sig;
  sig.quantified = quantified;
  sig.constraints = workspace.to_constraints().renamed(to_canonical);
  for (const auto& q : quantified) {
    sig.params.push_back(QType{q});
    sig.results.push_back(QType{q});
  }

  TargetFunDef out;
  out.name = def.name;
  out.span = def.span;
  out.signature = sig;
  out.params = def.params;
  for (std::size_t j = n; j < k; ++j) out.params.push_back(ctx.fresh.var());

  ctx.theta[def.name] = sig;  // visible to the body: recursion is allowed
  ctx.fn_nodes[def.name] = ws_nodes;

  ExprState state;
  state.workspace = workspace;
  for (std::size_t i = 0; i < k; ++i) {
    auto& env = i < n ? state.gamma1 : state.gamma2;
    env.emplace(out.params[i], QType{ws_nodes[i]});
  }
  state.expected_return = ws_nodes;
  state.owner = def.name;
  Allocated body = alloc_expr(def.body, ctx, std::move(state));
  out.body = body.expr;
  return out;
}

}  // namespace

TargetExprPtr insert_swaps(const TargetExprPtr& expr, const TgtTypeEnv& gamma,
                           const SwapSequence& psi) {
  if (psi.empty()) return expr;
  const auto& [a1, a2] = psi.front();
  TgtTypeEnv swapped = apply_swaps_to_env({psi.front()}, gamma);
  TargetExprPtr inner = insert_swaps(expr, swapped, SwapSequence(psi.begin() + 1, psi.end()));
  VarName x1, x2;
  for (const auto& [v, t] : gamma) {
    if (t.idx == a1) x1 = v;
    if (t.idx == a2) x2 = v;
  }
  if (x1.empty() || x2.empty()) {
    throw Error(ErrorKind::MissingOccupant,
                "no variable occupies " + (x1.empty() ? a1 : a2) + " for a swap");
  }
  return tgt_swap({x2, x1}, {x1, x2}, inner);
}

AllocResult qubit_alloc(const CheckedProgram& checked, const CouplingGraph& graph) {
  if (!graph.is_connected()) {
    throw Error(ErrorKind::DisconnectedInput, "coupling graph is not connected");
  }
  if (static_cast<std::size_t>(checked.checked_budget) > graph.node_count()) {
    throw Error(ErrorKind::DeviceTooSmall,
                "program was checked at budget " + std::to_string(checked.checked_budget) +
                    " but the device has " + std::to_string(graph.node_count()) + " qubits");
  }

  SubgraphChain chain = construct_subgraphs(graph);
  SubgraphAssignment assignment = assign_subgraphs(checked.theta, chain);

  AllocCtx ctx;
  TargetProgram out;
  for (const auto& def : checked.program.defs) {
    out.defs.push_back(alloc_fundef(def, checked.theta.at(def.name),
                                    assignment.workspace.at(def.name), ctx));
  }

  ExprState state;
  state.workspace = graph;
  for (const auto& node : graph.nodes()) {
    VarName v = ctx.fresh.var();
    state.gamma2.emplace(v, QType{node});
    out.preamble.emplace_back(v, node);
  }
  // Alg. 1 imposes no return layout on main; leaves keep whatever placement
  // results (if-branches pin their own layout for re-convergence).
  state.expected_return = std::nullopt;
  state.owner = "main";
  Allocated entry = alloc_expr(checked.program.entry, ctx, std::move(state));
  out.entry = entry.expr;

  ctx.trace.preamble = out.preamble;
  ctx.trace.fn_workspace_nodes = ctx.fn_nodes;

  TgtCheckResult verify = check_program_tgt(out, graph);
  if (!verify.ok()) {
    std::ostringstream msg;
    msg << "allocator produced an ill-typed program: ";
    msg << verify.diagnostics.front().message;
    throw Error(ErrorKind::InternalPostconditionViolation, msg.str(),
                verify.diagnostics.front().span);
  }
  return {std::move(out), std::move(ctx.trace)};
}

}  // namespace qalloc
