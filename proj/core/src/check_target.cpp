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

#include "qalloc/check_target.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qalloc/graph_algos.hpp"
#include "qalloc/subst.hpp"

namespace qalloc {

namespace {

void record(TgtDerivation* d, const char* rule, const TgtTypeEnv& gamma,
            const TgtTupleType& type) {
  if (!d) return;
  d->rule = rule;
  for (const auto& [v, t] : gamma) d->gamma.emplace_back(v, t.idx);
  d->type = type;
}

TgtDerivation* premise(TgtDerivation* d) {
  if (!d) return nullptr;
  d->premises.emplace_back();
  return &d->premises.back();
}

QType consume(TgtTypeEnv& gamma, const VarName& v, Span span) {
  auto it = gamma.find(v);
  if (it == gamma.end()) {
    throw Error(ErrorKind::UnknownVariable, "variable '" + v + "' is not in scope", span);
  }
  QType t = it->second;
  gamma.erase(it);
  return t;
}

// Extends Γ maintaining WF(Φ|Γ): distinct variables at distinct qidxs.
void bind(TgtTypeEnv& gamma, const VarName& v, QType t, Span span) {
  for (const auto& [other, ot] : gamma) {
    if (ot.idx == t.idx) {
      throw Error(ErrorKind::WellFormednessViolation,
                  "variables '" + other + "' and '" + v + "' both placed at qidx " + t.idx,
                  span);
    }
  }
  if (!gamma.emplace(v, t).second) {
    throw Error(ErrorKind::DuplicateVariable,
                "variable '" + v + "' shadows an existing binding", span);
  }
}

std::string routing_hint(const CouplingGraph* device, const Qidx& a, const Qidx& b) {
  if (!device || !device->has_node(a) || !device->has_node(b) || !device->is_connected()) {
    return "";
  }
  std::vector<Qidx> path = shortest_path(*device, a, b);
  std::ostringstream out;
  out << "; nearest available path: ";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out << " - ";
    out << path[i];
  }
  return out.str();
}

void require_adjacent(const ConstraintSet& phi, const Qidx& a, const Qidx& b, const char* gate,
                      Span span, const CouplingGraph* device) {
  if (!phi.contains(a, b)) {
    std::ostringstream msg;
    msg << gate << " needs " << a << " ~ " << b << " but the qidxs are not connected"
        << routing_hint(device, a, b);
    throw Error(ErrorKind::ConnectivityViolation, msg.str(), span);
  }
}

void validate_signature(const TargetFunType& sig, const FunName& name, Span span) {
  std::set<Qidx> quantified(sig.quantified.begin(), sig.quantified.end());
  if (quantified.size() != sig.quantified.size()) {
    throw Error(ErrorKind::MalformedSignature,
                "duplicate quantified qidx in the signature of '" + name + "'", span);
  }
  auto check_member = [&](const Qidx& q, const char* where) {
    if (!quantified.count(q)) {
      throw Error(ErrorKind::MalformedSignature,
                  "qidx " + q + " in the " + where + " of '" + name + "' is not quantified",
                  span);
    }
  };
  for (const auto& [a, b] : sig.constraints.pairs()) {
    check_member(a, "constraints");
    check_member(b, "constraints");
  }
  for (const auto& p : sig.params) check_member(p.idx, "parameters");
  for (const auto& r : sig.results) check_member(r.idx, "results");
  std::set<Qidx> in_params;
  for (const auto& p : sig.params) in_params.insert(p.idx);
  for (const auto& q : sig.quantified) {
    if (!in_params.count(q)) {
      throw Error(ErrorKind::MalformedSignature,
                  "quantified qidx " + q + " of '" + name +
                      "' does not occur in the parameter types, so call sites cannot "
                      "determine it",
                  span);
    }
  }
}

}  // namespace

Instantiation instantiate_call(const TargetFunType& signature, const TgtTupleType& arg_types) {
  if (arg_types.size() != signature.params.size()) {
    throw Error(ErrorKind::ArityMismatch, "argument count does not match the signature");
  }
  std::set<Qidx> quantified(signature.quantified.begin(), signature.quantified.end());
  QidxSubst subst;
  for (std::size_t i = 0; i < arg_types.size(); ++i) {
    const Qidx& param = signature.params[i].idx;
    const Qidx& arg = arg_types[i].idx;
    if (!quantified.count(param)) {
      if (param != arg) {
        throw Error(ErrorKind::InstantiationConflict,
                    "parameter qidx " + param + " is concrete but the argument is at " + arg);
      }
      continue;
    }
    auto [it, inserted] = subst.emplace(param, arg);
    if (!inserted && it->second != arg) {
      throw Error(ErrorKind::InstantiationConflict,
                  "qidx " + param + " matched against both " + it->second + " and " + arg);
    }
  }
  for (const auto& q : signature.quantified) {
    if (!subst.count(q)) {
      throw Error(ErrorKind::MalformedSignature,
                  "quantified qidx " + q + " is not determined by the arguments");
    }
  }
  std::set<Qidx> images;
  for (const auto& [k, v] : subst) {
    if (!images.insert(v).second) {
      throw Error(ErrorKind::NonInjectiveInstantiation,
                  "two quantified qidxs are instantiated to " + v);
    }
  }
  Instantiation inst;
  inst.subst = std::move(subst);
  inst.results.reserve(signature.results.size());
  for (const auto& r : signature.results) {
    auto it = inst.subst.find(r.idx);
    inst.results.push_back(QType{it == inst.subst.end() ? r.idx : it->second});
  }
  return inst;
}

TgtTupleType check_expr_tgt(const TgtFunEnv& theta, const ConstraintSet& phi,
                            const TgtTypeEnv& gamma, const TargetExprPtr& expr,
                            TgtDerivation* derivation, const CouplingGraph* device) {
  const Span span = expr->span;
  return std::visit(
      [&](const auto& node) -> TgtTupleType {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TgtReturn>) {
          std::set<VarName> seen;
          TgtTupleType type;
          for (const auto& v : node.vars) {
            if (!seen.insert(v).second) {
              throw Error(ErrorKind::DuplicateVariable,
                          "variable '" + v + "' returned twice", span);
            }
            auto it = gamma.find(v);
            if (it == gamma.end()) {
              throw Error(ErrorKind::UnknownVariable, "variable '" + v + "' is not in scope",
                          span);
            }
            type.push_back(it->second);
          }
          for (const auto& [v, t] : gamma) {
            if (!seen.count(v)) {
              throw Error(ErrorKind::UnusedVariable,
                          "variable '" + v + "' is live but not returned", span);
            }
          }
          record(derivation, "T-Return", gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, TgtInit>) {
          if (!gamma.count(node.var)) {
            throw Error(ErrorKind::UnknownVariable,
                        "variable '" + node.var + "' is not in scope", span);
          }
          auto* prem = premise(derivation);
          TgtTupleType type = check_expr_tgt(theta, phi, gamma, node.body, prem, device);
          record(derivation, "T-Init", gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, TgtSwapLet> || std::is_same_v<T, TgtCnotLet>) {
          const char* gate = std::is_same_v<T, TgtSwapLet> ? "swap" : "cnot";
          if (node.ins.first == node.ins.second) {
            throw Error(ErrorKind::DuplicateVariable,
                        std::string(gate) + " arguments must be distinct variables", span);
          }
          TgtTypeEnv inner = gamma;
          QType t1 = consume(inner, node.ins.first, span);
          QType t2 = consume(inner, node.ins.second, span);
          require_adjacent(phi, t1.idx, t2.idx, gate, span, device);
          // The binders stay at the argument positions: x1 at α1, x2 at α2.
          // For swap it is the *state* that moves, not the qidx.
          bind(inner, node.outs.first, t1, span);
          bind(inner, node.outs.second, t2, span);
          auto* prem = premise(derivation);
          TgtTupleType type = check_expr_tgt(theta, phi, inner, node.body, prem, device);
          record(derivation, std::is_same_v<T, TgtSwapLet> ? "T-Swap" : "T-Cnot", gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, TgtHLet>) {
          TgtTypeEnv inner = gamma;
          QType t = consume(inner, node.in, span);
          bind(inner, node.out, t, span);
          auto* prem = premise(derivation);
          TgtTupleType type = check_expr_tgt(theta, phi, inner, node.body, prem, device);
          record(derivation, "T-H", gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, TgtCallLet>) {
          auto ft = theta.find(node.fn);
          if (ft == theta.end()) {
            throw Error(ErrorKind::UnknownVariable, "unknown function '" + node.fn + "'",
                        span);
          }
          const TargetFunType& sig = ft->second;
          if (node.args.size() != sig.params.size()) {
            throw Error(ErrorKind::ArityMismatch,
                        "function '" + node.fn + "' takes " +
                            std::to_string(sig.params.size()) + " arguments, got " +
                            std::to_string(node.args.size()),
                        span);
          }
          if (node.outs.size() != sig.results.size()) {
            throw Error(ErrorKind::ArityMismatch,
                        "function '" + node.fn + "' returns " +
                            std::to_string(sig.results.size()) + " values, bound to " +
                            std::to_string(node.outs.size()),
                        span);
          }
          std::set<VarName> arg_seen;
          for (const auto& a : node.args) {
            if (!arg_seen.insert(a).second) {
              throw Error(ErrorKind::DuplicateVariable, "argument '" + a + "' passed twice",
                          span);
            }
          }
          TgtTypeEnv inner = gamma;
          TgtTupleType arg_types;
          for (const auto& a : node.args) arg_types.push_back(consume(inner, a, span));
          Instantiation inst;
          try {
            inst = instantiate_call(sig, arg_types);
          } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (calling '" + node.fn + "')",
                        span);
          }
          ConstraintSet required = sig.constraints.renamed(inst.subst);
          for (const auto& [a, b] : required.pairs()) {
            if (!phi.contains(a, b)) {
              std::ostringstream msg;
              msg << "calling '" << node.fn << "' requires " << a << " ~ " << b
                  << " which is not available" << routing_hint(device, a, b);
              throw Error(ErrorKind::ConstraintUnsatisfied, msg.str(), span);
            }
          }
          for (std::size_t i = 0; i < node.outs.size(); ++i) {
            bind(inner, node.outs[i], inst.results[i], span);
          }
          auto* prem = premise(derivation);
          TgtTupleType type = check_expr_tgt(theta, phi, inner, node.body, prem, device);
          record(derivation, "T-Call", gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, TgtTupleLet>) {
          std::set<VarName> fv = free_vars(node.rhs);
          TgtTypeEnv gamma1, gamma2;
          for (const auto& [v, t] : gamma) {
            (fv.count(v) ? gamma1 : gamma2).emplace(v, t);
          }
          auto* prem1 = premise(derivation);
          TgtTupleType rhs_type = check_expr_tgt(theta, phi, gamma1, node.rhs, prem1, device);
          if (rhs_type.size() != node.outs.size()) {
            throw Error(ErrorKind::ArityMismatch,
                        "let binds " + std::to_string(node.outs.size()) +
                            " variables but the right-hand side returns " +
                            std::to_string(rhs_type.size()),
                        span);
          }
          TgtTypeEnv inner = gamma2;
          for (std::size_t i = 0; i < node.outs.size(); ++i) {
            bind(inner, node.outs[i], rhs_type[i], span);
          }
          auto* prem2 = premise(derivation);
          TgtTupleType type = check_expr_tgt(theta, phi, inner, node.body, prem2, device);
          record(derivation, "T-Let", gamma, type);
          return type;
        } else {
          static_assert(std::is_same_v<T, TgtIf>);
          if (!gamma.count(node.cond)) {
            throw Error(ErrorKind::UnknownVariable,
                        "variable '" + node.cond + "' is not in scope", span);
          }
          auto* prem1 = premise(derivation);
          TgtTupleType then_type =
              check_expr_tgt(theta, phi, gamma, node.then_branch, prem1, device);
          auto* prem2 = premise(derivation);
          TgtTupleType else_type =
              check_expr_tgt(theta, phi, gamma, node.else_branch, prem2, device);
          if (then_type != else_type) {
            throw Error(ErrorKind::BranchMismatch,
                        "if branches have different tuple types", span);
          }
          record(derivation, "T-If", gamma, then_type);
          return then_type;
        }
      },
      expr->node);
}

TgtCheckResult check_program_tgt(const TargetProgram& program, const CouplingGraph& graph) {
  TgtCheckResult result;
  TgtFunEnv theta;
  for (const auto& def : program.defs) {
    result.derivations.emplace_back();
    TgtDerivation& deriv = result.derivations.back();
    try {
      validate_signature(def.signature, def.name, def.span);
      if (def.params.size() != def.signature.params.size()) {
        throw Error(ErrorKind::ArityMismatch,
                    "parameter list and signature of '" + def.name + "' disagree", def.span);
      }
      // Polymorphic recursion: the body sees the fully quantified signature.
      TgtFunEnv extended = theta;
      extended[def.name] = def.signature;
      TgtTypeEnv gamma;
      for (std::size_t i = 0; i < def.params.size(); ++i) {
        bind(gamma, def.params[i], def.signature.params[i], def.span);
      }
      CouplingGraph workspace(
          def.signature.quantified,
          {def.signature.constraints.pairs().begin(), def.signature.constraints.pairs().end()});
      TgtTupleType body_type = check_expr_tgt(extended, def.signature.constraints, gamma,
                                              def.body, &deriv, &workspace);
      if (!(body_type == def.signature.results)) {
        throw Error(ErrorKind::MalformedSignature,
                    "body of '" + def.name + "' does not return the declared result type",
                    def.span);
      }
      theta = std::move(extended);
    } catch (const Error& e) {
      result.diagnostics.push_back({e.kind(), e.span(), e.what()});
      theta[def.name] = def.signature;  // keep checking later definitions
    }
  }
  result.derivations.emplace_back();
  try {
    TgtTypeEnv gamma;
    for (const auto& [var, idx] : program.preamble) {
      if (!graph.has_node(idx)) {
        throw Error(ErrorKind::WellFormednessViolation,
                    "preamble places '" + var + "' at unknown node " + idx);
      }
      bind(gamma, var, QType{idx}, {});
    }
    check_expr_tgt(theta, graph.to_constraints(), gamma, program.entry,
                   &result.derivations.back(), &graph);
  } catch (const Error& e) {
    result.diagnostics.push_back({e.kind(), e.span(), e.what()});
  }
  return result;
}

namespace {

void explain_rec(const TgtDerivation& d, int depth, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << d.rule << "  Γ={";
  for (std::size_t i = 0; i < d.gamma.size(); ++i) {
    if (i) out << ", ";
    out << d.gamma[i].first << ":q(" << d.gamma[i].second << ")";
  }
  out << "}  : ";
  if (d.type.empty()) {
    out << "()";
  } else {
    for (std::size_t i = 0; i < d.type.size(); ++i) {
      if (i) out << "*";
      out << "q(" << d.type[i].idx << ")";
    }
  }
  out << "\n";
  for (const auto& p : d.premises) explain_rec(p, depth + 1, out);
}

}  // namespace

std::string explain(const TgtDerivation& derivation) {
  std::ostringstream out;
  explain_rec(derivation, 0, out);
  return out.str();
}

}  // namespace qalloc
