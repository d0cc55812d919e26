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

#include "qalloc/sim.hpp"

#include <algorithm>
#include <sstream>

#include "qalloc/subst.hpp"

namespace qalloc {

namespace {

// The expression-level step is separated from the state update so that
// stepping under nested lets rewrites expressions only; the density matrix
// is copied once per successor, not once per nesting level.
struct StateOp {
  enum class Kind { None, ConsumeWire, Reset, Cnot, Swap, H, Measure } kind = Kind::None;
  VarName a, b;
  bool outcome = false;
};

template <typename ExprPtr>
struct CoreStep {
  StepKind kind = StepKind::Stuck;
  StuckInfo stuck;
  struct Succ {
    ExprPtr expr;
    StateOp op;
    std::optional<bool> branch;
  };
  std::vector<Succ> successors;
};

template <typename ExprPtr>
CoreStep<ExprPtr> core_stuck(ErrorKind kind, std::string message) {
  CoreStep<ExprPtr> r;
  r.kind = StepKind::Stuck;
  r.stuck = {kind, std::move(message)};
  return r;
}

template <typename ExprPtr>
CoreStep<ExprPtr> core_value() {
  CoreStep<ExprPtr> r;
  r.kind = StepKind::Value;
  return r;
}

template <typename ExprPtr>
CoreStep<ExprPtr> core_progress(ExprPtr expr, StateOp op = {},
                                std::optional<bool> branch = std::nullopt) {
  CoreStep<ExprPtr> r;
  r.kind = StepKind::Progress;
  r.successors.push_back({std::move(expr), std::move(op), branch});
  return r;
}

bool src_wire_live(const SrcConfig& cfg, const VarName& v) {
  return cfg.state.wire_index(v) >= 0 && !cfg.free_wires.count(v);
}

CoreStep<SourceExprPtr> core_step_src(const SourceExprPtr& expr, const SrcConfig& config,
                                      const std::map<FunName, SourceFunDef>& defs,
                                      FreshNames& fresh) {
  using R = CoreStep<SourceExprPtr>;
  return std::visit(
      [&](const auto& node) -> R {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          return core_value<SourceExprPtr>();
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          if (config.free_wires.empty()) {
            return core_stuck<SourceExprPtr>(ErrorKind::StuckNoFreeQubit,
                                             "init with no free qubit left");
          }
          VarName wire = *config.free_wires.begin();  // deterministic choice
          StateOp op;
          op.kind = StateOp::Kind::ConsumeWire;
          op.a = wire;
          return core_progress(
              substitute_avoiding(VarSubst{{node.bound, wire}}, node.body, fresh), op);
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          if (!src_wire_live(config, node.var)) {
            return core_stuck<SourceExprPtr>(ErrorKind::StuckIllFormed,
                                             "discard of non-live wire '" + node.var + "'");
          }
          StateOp op;
          op.kind = StateOp::Kind::Reset;
          op.a = node.var;
          return core_progress(node.body, op);
        } else if constexpr (std::is_same_v<T, SrcCnotLet>) {
          if (node.ins.first == node.ins.second || !src_wire_live(config, node.ins.first) ||
              !src_wire_live(config, node.ins.second)) {
            return core_stuck<SourceExprPtr>(ErrorKind::StuckIllFormed,
                                             "cnot on non-live wires");
          }
          StateOp op;
          op.kind = StateOp::Kind::Cnot;
          op.a = node.ins.first;
          op.b = node.ins.second;
          return core_progress(
              substitute_avoiding(VarSubst{{node.outs.first, node.ins.first},
                                           {node.outs.second, node.ins.second}},
                                  node.body, fresh),
              op);
        } else if constexpr (std::is_same_v<T, SrcHLet>) {
          if (!src_wire_live(config, node.in)) {
            return core_stuck<SourceExprPtr>(ErrorKind::StuckIllFormed,
                                             "h on a non-live wire");
          }
          StateOp op;
          op.kind = StateOp::Kind::H;
          op.a = node.in;
          return core_progress(
              substitute_avoiding(VarSubst{{node.out, node.in}}, node.body, fresh), op);
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          auto it = defs.find(node.fn);
          if (it == defs.end()) {
            return core_stuck<SourceExprPtr>(ErrorKind::StuckIllFormed,
                                             "call to unknown function '" + node.fn + "'");
          }
          const SourceFunDef& def = it->second;
          if (def.params.size() != node.args.size()) {
            return core_stuck<SourceExprPtr>(ErrorKind::StuckIllFormed,
                                             "arity mismatch calling '" + node.fn + "'");
          }
          VarSubst subst;
          for (std::size_t i = 0; i < def.params.size(); ++i) {
            subst.emplace(def.params[i], node.args[i]);
          }
          return core_progress(src_tuple_let(
              node.outs, substitute_avoiding(subst, def.body, fresh), node.body));
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          if (const auto* ret = std::get_if<SrcReturn>(&node.rhs->node)) {
            if (ret->vars.size() != node.outs.size()) {
              return core_stuck<SourceExprPtr>(ErrorKind::StuckIllFormed,
                                               "let arity does not match the returned tuple");
            }
            VarSubst subst;
            for (std::size_t i = 0; i < node.outs.size(); ++i) {
              subst.emplace(node.outs[i], ret->vars[i]);
            }
            return core_progress(substitute_avoiding(subst, node.body, fresh));
          }
          R inner = core_step_src(node.rhs, config, defs, fresh);
          if (inner.kind != StepKind::Progress) return inner;
          R out;
          out.kind = StepKind::Progress;
          for (auto& succ : inner.successors) {
            out.successors.push_back(
                {src_tuple_let(node.outs, std::move(succ.expr), node.body), succ.op,
                 succ.branch});
          }
          return out;
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          if (!src_wire_live(config, node.cond)) {
            return core_stuck<SourceExprPtr>(ErrorKind::StuckIllFormed,
                                             "if on a non-live wire");
          }
          R out;
          out.kind = StepKind::Progress;
          StateOp m1;
          m1.kind = StateOp::Kind::Measure;
          m1.a = node.cond;
          m1.outcome = true;
          out.successors.push_back({node.then_branch, m1, true});
          StateOp m0 = m1;
          m0.outcome = false;
          out.successors.push_back({node.else_branch, m0, false});
          return out;
        }
      },
      expr->node);
}

CoreStep<TargetExprPtr> core_step_tgt(const TargetExprPtr& expr, const TgtConfig& config,
                                      const std::map<FunName, TargetFunDef>& defs,
                                      const CouplingGraph& graph,
                                      const std::map<VarName, Qidx>& wire_nodes,
                                      FreshNames& fresh) {
  using R = CoreStep<TargetExprPtr>;
  auto node_of = [&](const VarName& wire) -> const Qidx* {
    auto it = wire_nodes.find(wire);
    return it == wire_nodes.end() ? nullptr : &it->second;
  };
  return std::visit(
      [&](const auto& node) -> R {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TgtReturn>) {
          return core_value<TargetExprPtr>();
        } else if constexpr (std::is_same_v<T, TgtInit>) {
          if (config.state.wire_index(node.var) < 0) {
            return core_stuck<TargetExprPtr>(ErrorKind::StuckIllFormed,
                                             "init of unknown wire '" + node.var + "'");
          }
          StateOp op;
          op.kind = StateOp::Kind::Reset;
          op.a = node.var;
          return core_progress(node.body, op);
        } else if constexpr (std::is_same_v<T, TgtSwapLet> || std::is_same_v<T, TgtCnotLet>) {
          const char* gate = std::is_same_v<T, TgtSwapLet> ? "swap" : "cnot";
          const Qidx* n1 = node_of(node.ins.first);
          const Qidx* n2 = node_of(node.ins.second);
          if (!n1 || !n2 || node.ins.first == node.ins.second) {
            return core_stuck<TargetExprPtr>(ErrorKind::StuckIllFormed,
                                             std::string(gate) + " on unknown wires");
          }
          if (!graph.has_edge(*n1, *n2)) {
            return core_stuck<TargetExprPtr>(
                ErrorKind::ConnectivityStuck,
                std::string(gate) + "(" + node.ins.first + ", " + node.ins.second +
                    ") acts on non-adjacent nodes " + *n1 + " and " + *n2);
          }
          StateOp op;
          op.kind = std::is_same_v<T, TgtSwapLet> ? StateOp::Kind::Swap : StateOp::Kind::Cnot;
          op.a = node.ins.first;
          op.b = node.ins.second;
          return core_progress(
              substitute_avoiding(VarSubst{{node.outs.first, node.ins.first},
                                           {node.outs.second, node.ins.second}},
                                  node.body, fresh),
              op);
        } else if constexpr (std::is_same_v<T, TgtHLet>) {
          if (config.state.wire_index(node.in) < 0) {
            return core_stuck<TargetExprPtr>(ErrorKind::StuckIllFormed,
                                             "h on an unknown wire");
          }
          StateOp op;
          op.kind = StateOp::Kind::H;
          op.a = node.in;
          return core_progress(
              substitute_avoiding(VarSubst{{node.out, node.in}}, node.body, fresh), op);
        } else if constexpr (std::is_same_v<T, TgtCallLet>) {
          auto it = defs.find(node.fn);
          if (it == defs.end()) {
            return core_stuck<TargetExprPtr>(ErrorKind::StuckIllFormed,
                                             "call to unknown function '" + node.fn + "'");
          }
          const TargetFunDef& def = it->second;
          if (def.params.size() != node.args.size()) {
            return core_stuck<TargetExprPtr>(ErrorKind::StuckIllFormed,
                                             "arity mismatch calling '" + node.fn + "'");
          }
          VarSubst subst;
          for (std::size_t i = 0; i < def.params.size(); ++i) {
            subst.emplace(def.params[i], node.args[i]);
          }
          return core_progress(tgt_tuple_let(
              node.outs, substitute_avoiding(subst, def.body, fresh), node.body));
        } else if constexpr (std::is_same_v<T, TgtTupleLet>) {
          if (const auto* ret = std::get_if<TgtReturn>(&node.rhs->node)) {
            if (ret->vars.size() != node.outs.size()) {
              return core_stuck<TargetExprPtr>(ErrorKind::StuckIllFormed,
                                               "let arity does not match the returned tuple");
            }
            VarSubst subst;
            for (std::size_t i = 0; i < node.outs.size(); ++i) {
              subst.emplace(node.outs[i], ret->vars[i]);
            }
            return core_progress(substitute_avoiding(subst, node.body, fresh));
          }
          R inner = core_step_tgt(node.rhs, config, defs, graph, wire_nodes, fresh);
          if (inner.kind != StepKind::Progress) return inner;
          R out;
          out.kind = StepKind::Progress;
          for (auto& succ : inner.successors) {
            out.successors.push_back(
                {tgt_tuple_let(node.outs, std::move(succ.expr), node.body), succ.op,
                 succ.branch});
          }
          return out;
        } else {
          static_assert(std::is_same_v<T, TgtIf>);
          if (config.state.wire_index(node.cond) < 0) {
            return core_stuck<TargetExprPtr>(ErrorKind::StuckIllFormed,
                                             "if on an unknown wire");
          }
          R out;
          out.kind = StepKind::Progress;
          StateOp m1;
          m1.kind = StateOp::Kind::Measure;
          m1.a = node.cond;
          m1.outcome = true;
          out.successors.push_back({node.then_branch, m1, true});
          StateOp m0 = m1;
          m0.outcome = false;
          out.successors.push_back({node.else_branch, m0, false});
          return out;
        }
      },
      expr->node);
}

void apply_op(const StateOp& op, DensityState& state, std::set<VarName>* free_wires) {
  switch (op.kind) {
    case StateOp::Kind::None:
      break;
    case StateOp::Kind::ConsumeWire:
      if (free_wires) free_wires->erase(op.a);
      break;
    case StateOp::Kind::Reset:
      apply_reset(state, op.a);
      if (free_wires) free_wires->insert(op.a);
      break;
    case StateOp::Kind::Cnot:
      apply_cnot(state, op.a, op.b);
      break;
    case StateOp::Kind::Swap:
      apply_swap(state, op.a, op.b);
      break;
    case StateOp::Kind::H:
      apply_h(state, op.a);
      break;
    case StateOp::Kind::Measure:
      apply_measurement(state, op.a, op.outcome);
      break;
  }
}

}  // namespace

StepResult<SrcConfig> step_src(const SrcConfig& config,
                               const std::map<FunName, SourceFunDef>& defs,
                               FreshNames& fresh) {
  CoreStep<SourceExprPtr> core = core_step_src(config.expr, config, defs, fresh);
  StepResult<SrcConfig> out;
  out.kind = core.kind;
  out.stuck = core.stuck;
  for (auto& succ : core.successors) {
    SrcConfig next;
    next.free_wires = config.free_wires;
    next.state = config.state;
    next.expr = std::move(succ.expr);
    apply_op(succ.op, next.state, &next.free_wires);
    out.successors.emplace_back(std::move(next), succ.branch);
  }
  return out;
}

StepResult<TgtConfig> step_tgt(const TgtConfig& config,
                               const std::map<FunName, TargetFunDef>& defs,
                               const CouplingGraph& graph,
                               const std::map<VarName, Qidx>& wire_nodes, FreshNames& fresh) {
  CoreStep<TargetExprPtr> core =
      core_step_tgt(config.expr, config, defs, graph, wire_nodes, fresh);
  StepResult<TgtConfig> out;
  out.kind = core.kind;
  out.stuck = core.stuck;
  for (auto& succ : core.successors) {
    TgtConfig next;
    next.state = config.state;
    next.expr = std::move(succ.expr);
    apply_op(succ.op, next.state, nullptr);
    out.successors.emplace_back(std::move(next), succ.branch);
  }
  return out;
}

std::map<FunName, SourceFunDef> defs_by_name(const SourceProgram& program) {
  std::map<FunName, SourceFunDef> out;
  for (const auto& d : program.defs) out.emplace(d.name, d);
  return out;
}

std::map<FunName, TargetFunDef> defs_by_name(const TargetProgram& program) {
  std::map<FunName, TargetFunDef> out;
  for (const auto& d : program.defs) out.emplace(d.name, d);
  return out;
}

SrcConfig initial_source_config(const SourceProgram& program, std::size_t wires) {
  FreshNames names;
  std::vector<VarName> labels;
  labels.reserve(wires);
  for (std::size_t i = 0; i < wires; ++i) labels.push_back(names.wire());
  SrcConfig cfg;
  cfg.free_wires.insert(labels.begin(), labels.end());
  cfg.state = DensityState::zeros(labels);
  cfg.expr = program.entry;
  return cfg;
}

std::pair<TgtConfig, std::map<VarName, Qidx>> initial_target_config(
    const TargetProgram& program) {
  std::vector<VarName> labels;
  std::map<VarName, Qidx> nodes;
  for (const auto& [var, idx] : program.preamble) {
    labels.push_back(var);
    nodes[var] = idx;
  }
  TgtConfig cfg;
  cfg.state = DensityState::zeros(labels);
  cfg.expr = program.entry;
  return {std::move(cfg), std::move(nodes)};
}

namespace {

// Shared DFS driver for both languages.
template <typename Config, typename Stepper>
RunReport explore(Config initial, std::size_t fuel, Stepper&& step) {
  RunReport report;
  struct Item {
    Config cfg;
    std::string path;
  };
  std::vector<Item> stack;
  stack.push_back({std::move(initial), ""});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    auto result = step(item.cfg);
    if (result.kind == StepKind::Value) {
      BranchTrace trace;
      trace.path = item.path;
      if constexpr (std::is_same_v<Config, SrcConfig>) {
        trace.returned = std::get<SrcReturn>(item.cfg.expr->node).vars;
      } else {
        trace.returned = std::get<TgtReturn>(item.cfg.expr->node).vars;
      }
      trace.state = std::move(item.cfg.state);
      trace.weight = trace.state.trace_real();
      report.traces.push_back(std::move(trace));
      continue;
    }
    if (result.kind == StepKind::Stuck) {
      report.stuck.push_back({result.stuck.kind, result.stuck.message, item.path});
      continue;
    }
    if (report.steps_used >= fuel) {
      report.fuel_exhausted = true;
      break;
    }
    ++report.steps_used;
    // Push in reverse so the outcome-1 branch is explored first.
    for (auto it = result.successors.rbegin(); it != result.successors.rend(); ++it) {
      std::string path = item.path;
      if (it->second.has_value()) path += *it->second ? 'T' : 'E';
      stack.push_back({std::move(it->first), std::move(path)});
    }
  }
  std::sort(report.traces.begin(), report.traces.end(),
            [](const BranchTrace& a, const BranchTrace& b) { return a.path < b.path; });
  return report;
}

}  // namespace

RunReport run_source(const SourceProgram& program, std::size_t wires, std::size_t fuel) {
  auto defs = defs_by_name(program);
  FreshNames fresh;
  return explore(initial_source_config(program, wires), fuel,
                 [&](const SrcConfig& cfg) { return step_src(cfg, defs, fresh); });
}

RunReport run_target(const TargetProgram& program, const CouplingGraph& graph,
                     std::size_t fuel) {
  auto defs = defs_by_name(program);
  auto [cfg, nodes] = initial_target_config(program);
  FreshNames fresh;
  auto wire_nodes = std::move(nodes);
  return explore(std::move(cfg), fuel, [&, wire_nodes](const TgtConfig& c) {
    return step_tgt(c, defs, graph, wire_nodes, fresh);
  });
}

PreservationReport check_semantic_preservation(const SourceProgram& source,
                                               const TargetProgram& target,
                                               const CouplingGraph& graph, std::size_t fuel,
                                               double tol) {
  PreservationReport report;
  RunReport src_run = run_source(source, graph.node_count(), fuel);
  RunReport tgt_run = run_target(target, graph, fuel);
  report.fuel_exhausted = src_run.fuel_exhausted || tgt_run.fuel_exhausted;
  if (report.fuel_exhausted) {
    report.problems.push_back("fuel exhausted before all branches terminated");
  }
  for (const auto& s : src_run.stuck) {
    report.problems.push_back("source stuck (" + std::string(error_kind_name(s.kind)) +
                              ") on branch '" + s.path + "': " + s.message);
  }
  for (const auto& s : tgt_run.stuck) {
    report.problems.push_back("target stuck (" + std::string(error_kind_name(s.kind)) +
                              ") on branch '" + s.path + "': " + s.message);
  }

  std::map<std::string, const BranchTrace*> src_by_path, tgt_by_path;
  for (const auto& t : src_run.traces) src_by_path[t.path] = &t;
  for (const auto& t : tgt_run.traces) tgt_by_path[t.path] = &t;
  if (src_by_path.size() != src_run.traces.size() ||
      tgt_by_path.size() != tgt_run.traces.size()) {
    report.structure_mismatch = true;
    report.problems.push_back("duplicate branch outcome paths");
  }
  for (const auto& [path, t] : src_by_path) {
    if (!tgt_by_path.count(path)) {
      report.structure_mismatch = true;
      report.problems.push_back("source branch '" + path + "' has no target counterpart");
    }
  }
  for (const auto& [path, t] : tgt_by_path) {
    if (!src_by_path.count(path)) {
      report.structure_mismatch = true;
      report.problems.push_back("target branch '" + path + "' has no source counterpart");
    }
  }
  if (report.structure_mismatch) return report;

  for (const auto& [path, src_trace] : src_by_path) {
    const BranchTrace* tgt_trace = tgt_by_path.at(path);
    BranchComparison cmp;
    cmp.path = path;
    cmp.source_weight = src_trace->weight;
    cmp.target_weight = tgt_trace->weight;
    cmp.weights_match = std::abs(cmp.source_weight - cmp.target_weight) <= tol;

    // Positional correspondence: target returns the source tuple first,
    // padding after; leftover wires on both sides are paired in name order.
    std::optional<std::map<VarName, VarName>> hint;
    if (src_trace->returned.size() <= tgt_trace->returned.size() &&
        src_trace->state.wires() == tgt_trace->state.wires()) {
      std::map<VarName, VarName> h;
      std::set<VarName> src_used, tgt_used;
      bool valid = true;
      for (std::size_t i = 0; i < src_trace->returned.size(); ++i) {
        const VarName& a = src_trace->returned[i];
        const VarName& b = tgt_trace->returned[i];
        if (!src_used.insert(a).second || !tgt_used.insert(b).second) valid = false;
        h[a] = b;
      }
      std::vector<VarName> src_rest, tgt_rest;
      for (const auto& l : src_trace->state.labels) {
        if (!src_used.count(l)) src_rest.push_back(l);
      }
      for (const auto& l : tgt_trace->state.labels) {
        if (!tgt_used.count(l)) tgt_rest.push_back(l);
      }
      std::sort(src_rest.begin(), src_rest.end());
      std::sort(tgt_rest.begin(), tgt_rest.end());
      if (valid && src_rest.size() == tgt_rest.size()) {
        for (std::size_t i = 0; i < src_rest.size(); ++i) h[src_rest[i]] = tgt_rest[i];
        hint = std::move(h);
      }
    }
    try {
      IsoVerdict verdict =
          density_isomorphic_detail(src_trace->state, tgt_trace->state, hint, tol);
      cmp.isomorphic = verdict != IsoVerdict::NotIsomorphic;
      cmp.needed_fallback_permutation = verdict == IsoVerdict::PermutationMatched;
    } catch (const Error&) {
      cmp.isomorphic = false;
    }
    if (!cmp.weights_match) {
      std::ostringstream msg;
      msg << "branch '" << path << "' weights differ: " << cmp.source_weight << " vs "
          << cmp.target_weight;
      report.problems.push_back(msg.str());
    }
    if (!cmp.isomorphic) {
      report.problems.push_back("branch '" + path +
                                "' terminal states are not isomorphic");
    }
    report.branches.push_back(std::move(cmp));
  }
  return report;
}

}  // namespace qalloc
