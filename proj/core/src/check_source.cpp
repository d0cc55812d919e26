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

#include "qalloc/check_source.hpp"

#include <algorithm>
#include <sstream>

#include "qalloc/subst.hpp"

namespace qalloc {

namespace {

TupleType qbits(std::size_t n) { return TupleType(n, SimpleType::Qbit); }

void record(SrcDerivation* d, const char* rule, int n, const SrcTypeEnv& gamma,
            const TupleType& type) {
  if (!d) return;
  d->rule = rule;
  d->budget = n;
  d->gamma = env_domain(gamma);
  d->type = type;
}

SrcDerivation* premise(SrcDerivation* d) {
  if (!d) return nullptr;
  d->premises.emplace_back();
  return &d->premises.back();
}

SimpleType consume(SrcTypeEnv& gamma, const VarName& v, Span span) {
  auto it = gamma.find(v);
  if (it == gamma.end()) {
    throw Error(ErrorKind::UnknownVariable, "variable '" + v + "' is not in scope", span);
  }
  SimpleType t = it->second;
  gamma.erase(it);
  return t;
}

void bind(SrcTypeEnv& gamma, const VarName& v, SimpleType t, Span span) {
  if (!gamma.emplace(v, t).second) {
    throw Error(ErrorKind::DuplicateVariable,
                "variable '" + v + "' shadows an existing binding", span);
  }
}

// ---------------------------------------------------------------------------
// Structural passes for signature inference. Both passes are purely
// syntactic; anything they cannot resolve surfaces again, with better
// diagnostics, in the real check that follows.
// ---------------------------------------------------------------------------

struct FnShape {
  std::size_t in_arity = 0;
  std::size_t out_arity = 0;
  int budget = 0;
};

std::size_t out_arity(const SourceExprPtr& e) {
  return std::visit(
      [&](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          return n.vars.size();
        } else if constexpr (std::is_same_v<T, SrcIf>) {
          std::size_t a = out_arity(n.then_branch);
          std::size_t b = out_arity(n.else_branch);
          if (a != b) {
            throw Error(ErrorKind::BranchMismatch,
                        "if branches return tuples of different arity", e->span);
          }
          return a;
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          return out_arity(n.body);
        } else if constexpr (std::is_same_v<T, SrcInitLet> || std::is_same_v<T, SrcDiscard> ||
                             std::is_same_v<T, SrcCnotLet> || std::is_same_v<T, SrcHLet> ||
                             std::is_same_v<T, SrcCallLet>) {
          return out_arity(n.body);
        }
      },
      e->node);
}

int count_inits(const SourceExprPtr& e) {
  return std::visit(
      [&](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          return 0;
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          return 1 + count_inits(n.body);
        } else if constexpr (std::is_same_v<T, SrcIf>) {
          return count_inits(n.then_branch) + count_inits(n.else_branch);
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          return count_inits(n.rhs) + count_inits(n.body);
        } else {
          return count_inits(n.body);
        }
      },
      e->node);
}

// Minimal budget N at which the expression can be checked, assuming the
// shapes in `shapes` for every called function.
int min_budget(const SourceExprPtr& e, const std::map<FunName, FnShape>& shapes) {
  return std::visit(
      [&](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          return 0;
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          return std::max(1, min_budget(n.body, shapes) + 1);
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          return std::max(0, min_budget(n.body, shapes) - 1);
        } else if constexpr (std::is_same_v<T, SrcCnotLet> || std::is_same_v<T, SrcHLet>) {
          return min_budget(n.body, shapes);
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          auto it = shapes.find(n.fn);
          if (it == shapes.end()) {
            throw Error(ErrorKind::UnknownVariable, "unknown function '" + n.fn + "'",
                        e->span);
          }
          int after = min_budget(n.body, shapes) + static_cast<int>(n.outs.size()) -
                      static_cast<int>(n.args.size());
          return std::max({it->second.budget, after, 0});
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          int rhs = min_budget(n.rhs, shapes);
          int body = min_budget(n.body, shapes) + static_cast<int>(n.outs.size()) -
                     static_cast<int>(free_vars(n.rhs).size());
          return std::max({rhs, body, 0});
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          return std::max(min_budget(n.then_branch, shapes),
                          min_budget(n.else_branch, shapes));
        }
      },
      e->node);
}

std::map<FunName, FnShape> shapes_of(const SrcFunEnv& theta) {
  std::map<FunName, FnShape> shapes;
  for (const auto& [name, sig] : theta) {
    shapes[name] = FnShape{sig.params.size(), sig.results.size(), sig.budget};
  }
  return shapes;
}

}  // namespace

TupleType check_expr(const SrcFunEnv& theta, int n, const SrcTypeEnv& gamma,
                     const SourceExprPtr& expr, SrcDerivation* derivation) {
  const Span span = expr->span;
  if (n < 0) {
    throw Error(ErrorKind::BudgetExceeded, "negative qubit budget", span);
  }
  return std::visit(
      [&](const auto& node) -> TupleType {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          std::set<VarName> seen;
          for (const auto& v : node.vars) {
            if (!seen.insert(v).second) {
              throw Error(ErrorKind::DuplicateVariable,
                          "variable '" + v + "' returned twice", span);
            }
            if (!gamma.count(v)) {
              throw Error(ErrorKind::UnknownVariable, "variable '" + v + "' is not in scope",
                          span);
            }
          }
          for (const auto& [v, t] : gamma) {
            if (!seen.count(v)) {
              throw Error(ErrorKind::UnusedVariable,
                          "variable '" + v + "' is live but not returned", span);
            }
          }
          TupleType type = qbits(node.vars.size());
          record(derivation, "T-Return", n, gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          if (gamma.count(node.bound)) {
            throw Error(ErrorKind::DuplicateVariable,
                        "variable '" + node.bound + "' shadows an existing binding", span);
          }
          if (n < 1) {
            throw Error(ErrorKind::BudgetExceeded,
                        "init needs one free qubit but the budget is 0", span);
          }
          SrcTypeEnv inner = gamma;
          bind(inner, node.bound, SimpleType::Qbit, span);
          auto* prem = premise(derivation);
          TupleType type = check_expr(theta, n - 1, inner, node.body, prem);
          record(derivation, "T-Init", n, gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          SrcTypeEnv inner = gamma;
          consume(inner, node.var, span);
          auto* prem = premise(derivation);
          TupleType type = check_expr(theta, n + 1, inner, node.body, prem);
          record(derivation, "T-Discard", n, gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, SrcCnotLet>) {
          if (node.ins.first == node.ins.second) {
            throw Error(ErrorKind::DuplicateVariable,
                        "cnot arguments must be distinct variables", span);
          }
          SrcTypeEnv inner = gamma;
          consume(inner, node.ins.first, span);
          consume(inner, node.ins.second, span);
          bind(inner, node.outs.first, SimpleType::Qbit, span);
          bind(inner, node.outs.second, SimpleType::Qbit, span);
          auto* prem = premise(derivation);
          TupleType type = check_expr(theta, n, inner, node.body, prem);
          record(derivation, "T-Cnot", n, gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, SrcHLet>) {
          SrcTypeEnv inner = gamma;
          consume(inner, node.in, span);
          bind(inner, node.out, SimpleType::Qbit, span);
          auto* prem = premise(derivation);
          TupleType type = check_expr(theta, n, inner, node.body, prem);
          record(derivation, "T-H", n, gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          auto ft = theta.find(node.fn);
          if (ft == theta.end()) {
            throw Error(ErrorKind::UnknownVariable, "unknown function '" + node.fn + "'",
                        span);
          }
          const SourceFunType& sig = ft->second;
          if (node.args.size() != sig.params.size()) {
            std::ostringstream msg;
            msg << "function '" << node.fn << "' takes " << sig.params.size()
                << " arguments, got " << node.args.size();
            throw Error(ErrorKind::ArityMismatch, msg.str(), span);
          }
          if (node.outs.size() != sig.results.size()) {
            std::ostringstream msg;
            msg << "function '" << node.fn << "' returns " << sig.results.size()
                << " values, bound to " << node.outs.size();
            throw Error(ErrorKind::ArityMismatch, msg.str(), span);
          }
          if (n < sig.budget) {
            std::ostringstream msg;
            msg << "calling '" << node.fn << "' needs budget " << sig.budget << " but only "
                << n << " is available";
            throw Error(ErrorKind::BudgetExceeded, msg.str(), span);
          }
          std::set<VarName> arg_seen;
          for (const auto& a : node.args) {
            if (!arg_seen.insert(a).second) {
              throw Error(ErrorKind::DuplicateVariable,
                          "argument '" + a + "' passed twice", span);
            }
          }
          SrcTypeEnv inner = gamma;
          for (const auto& a : node.args) consume(inner, a, span);
          for (const auto& o : node.outs) bind(inner, o, SimpleType::Qbit, span);
          int n2 = n - static_cast<int>(node.outs.size()) + static_cast<int>(node.args.size());
          auto* prem = premise(derivation);
          TupleType type = check_expr(theta, n2, inner, node.body, prem);
          record(derivation, "T-Call", n, gamma, type);
          return type;
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          std::set<VarName> fv = free_vars(node.rhs);
          SrcTypeEnv gamma1, gamma2;
          for (const auto& [v, t] : gamma) {
            (fv.count(v) ? gamma1 : gamma2).emplace(v, t);
          }
          auto* prem1 = premise(derivation);
          TupleType rhs_type = check_expr(theta, n, gamma1, node.rhs, prem1);
          if (rhs_type.size() != node.outs.size()) {
            std::ostringstream msg;
            msg << "let binds " << node.outs.size() << " variables but the right-hand side"
                << " returns " << rhs_type.size();
            throw Error(ErrorKind::ArityMismatch, msg.str(), span);
          }
          SrcTypeEnv inner = gamma2;
          for (std::size_t i = 0; i < node.outs.size(); ++i) {
            bind(inner, node.outs[i], rhs_type[i], span);
          }
          int n2 = n + static_cast<int>(gamma1.size()) - static_cast<int>(node.outs.size());
          auto* prem2 = premise(derivation);
          TupleType type = check_expr(theta, n2, inner, node.body, prem2);
          record(derivation, "T-Let", n, gamma, type);
          return type;
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          if (!gamma.count(node.cond)) {
            throw Error(ErrorKind::UnknownVariable,
                        "variable '" + node.cond + "' is not in scope", span);
          }
          auto* prem1 = premise(derivation);
          TupleType then_type = check_expr(theta, n, gamma, node.then_branch, prem1);
          auto* prem2 = premise(derivation);
          TupleType else_type = check_expr(theta, n, gamma, node.else_branch, prem2);
          if (then_type != else_type) {
            throw Error(ErrorKind::BranchMismatch, "if branches have different types", span);
          }
          record(derivation, "T-If", n, gamma, then_type);
          return then_type;
        }
      },
      expr->node);
}

SrcFunEnv check_fundefs(const std::vector<SourceFunDef>& defs) {
  SrcFunEnv theta;
  for (const auto& def : defs) {
    if (theta.count(def.name)) {
      throw Error(ErrorKind::DuplicateVariable,
                  "function '" + def.name + "' defined twice", def.span);
    }
    std::size_t results = out_arity(def.body);

    // Fixpoint on the inferred budget: the body may call the function being
    // defined, whose budget is exactly what we are computing. The budget is
    // monotone in the guess and bounded for well-formed programs, so either
    // it stabilizes quickly or we give up.
    std::map<FunName, FnShape> shapes = shapes_of(theta);
    int guess = 0;
    int limit = count_inits(def.body) + static_cast<int>(results) + 4;
    int budget = 0;
    for (int iter = 0;; ++iter) {
      shapes[def.name] = FnShape{def.params.size(), results, guess};
      budget = min_budget(def.body, shapes);
      if (budget == guess) break;
      if (iter >= limit) {
        throw Error(ErrorKind::SignatureInferenceFailure,
                    "no finite qubit budget works for function '" + def.name + "'", def.span);
      }
      guess = budget;
    }

    SourceFunType sig{qbits(def.params.size()), budget, qbits(results)};
    SrcFunEnv extended = theta;
    extended.emplace(def.name, sig);
    SrcTypeEnv gamma;
    for (const auto& p : def.params) bind(gamma, p, SimpleType::Qbit, def.span);
    TupleType body_type = check_expr(extended, budget, gamma, def.body);
    if (body_type.size() != results) {
      throw Error(ErrorKind::ArityMismatch,
                  "inferred result arity does not match the body of '" + def.name + "'",
                  def.span);
    }
    theta = std::move(extended);
  }
  return theta;
}

CheckedProgram check_program(const SourceProgram& program, int n) {
  CheckedProgram checked;
  checked.program = program;
  checked.theta = check_fundefs(program.defs);
  checked.checked_budget = n;
  checked.derivation.rule = "T-Prog";
  checked.derivation.budget = n;
  auto* entry = premise(&checked.derivation);
  checked.derivation.type = check_expr(checked.theta, n, {}, program.entry, entry);
  return checked;
}

int minimal_entry_budget(const SourceProgram& program) {
  SrcFunEnv theta = check_fundefs(program.defs);
  int n = min_budget(program.entry, shapes_of(theta));
  check_expr(theta, n, {}, program.entry);  // validate the estimate
  return n;
}

namespace {

void explain_rec(const SrcDerivation& d, int depth, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << d.rule << "  N=" << d.budget
      << "  dom(Γ)={";
  for (std::size_t i = 0; i < d.gamma.size(); ++i) {
    if (i) out << ", ";
    out << d.gamma[i];
  }
  out << "}  : ";
  if (d.type.empty()) {
    out << "()";
  } else {
    for (std::size_t i = 0; i < d.type.size(); ++i) {
      if (i) out << "*";
      out << "qbit";
    }
  }
  out << "\n";
  for (const auto& p : d.premises) explain_rec(p, depth + 1, out);
}

}  // namespace

std::string explain(const SrcDerivation& derivation) {
  std::ostringstream out;
  explain_rec(derivation, 0, out);
  return out.str();
}

}  // namespace qalloc
