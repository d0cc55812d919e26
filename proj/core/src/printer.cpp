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

#include "qalloc/printer.hpp"

#include <sstream>

namespace qalloc {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string tuple(const std::vector<VarName>& vars) { return "(" + join(vars, ", ") + ")"; }

std::string indent_str(int n) { return std::string(static_cast<std::size_t>(n), ' '); }

void print_src(const SourceExprPtr& e, int indent, std::ostringstream& out);

void print_src_block(const SourceExprPtr& e, int indent, std::ostringstream& out) {
  print_src(e, indent, out);
}

void print_src(const SourceExprPtr& e, int indent, std::ostringstream& out) {
  const std::string pad = indent_str(indent);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          out << pad << tuple(n.vars) << "\n";
        } else if constexpr (std::is_same_v<T, SrcInitLet>) {
          out << pad << "let " << n.bound << " = init() in\n";
          print_src(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, SrcDiscard>) {
          out << pad << "discard " << n.var << ";\n";
          print_src(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, SrcCnotLet>) {
          out << pad << "let (" << n.outs.first << ", " << n.outs.second << ") = cnot("
              << n.ins.first << ", " << n.ins.second << ") in\n";
          print_src(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, SrcHLet>) {
          out << pad << "let " << n.out << " = h(" << n.in << ") in\n";
          print_src(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, SrcCallLet>) {
          out << pad << "let " << tuple(n.outs) << " = " << n.fn << tuple(n.args) << " in\n";
          print_src(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, SrcTupleLet>) {
          if (std::holds_alternative<SrcReturn>(n.rhs->node)) {
            out << pad << "let " << tuple(n.outs) << " = "
                << tuple(std::get<SrcReturn>(n.rhs->node).vars) << " in\n";
          } else {
            out << pad << "let " << tuple(n.outs) << " =\n";
            print_src_block(n.rhs, indent + 4, out);
            out << pad << "  in\n";
          }
          print_src(n.body, indent, out);
        } else {
          static_assert(std::is_same_v<T, SrcIf>);
          out << pad << "if " << n.cond << " then {\n";
          print_src(n.then_branch, indent + 2, out);
          out << pad << "} else {\n";
          print_src(n.else_branch, indent + 2, out);
          out << pad << "}\n";
        }
      },
      e->node);
}

void print_tgt(const TargetExprPtr& e, int indent, std::ostringstream& out) {
  const std::string pad = indent_str(indent);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TgtReturn>) {
          out << pad << tuple(n.vars) << "\n";
        } else if constexpr (std::is_same_v<T, TgtInit>) {
          out << pad << "init " << n.var << ";\n";
          print_tgt(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, TgtSwapLet>) {
          out << pad << "let (" << n.outs.first << ", " << n.outs.second << ") = swap("
              << n.ins.first << ", " << n.ins.second << ") in\n";
          print_tgt(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, TgtCnotLet>) {
          out << pad << "let (" << n.outs.first << ", " << n.outs.second << ") = cnot("
              << n.ins.first << ", " << n.ins.second << ") in\n";
          print_tgt(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, TgtHLet>) {
          out << pad << "let " << n.out << " = h(" << n.in << ") in\n";
          print_tgt(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, TgtCallLet>) {
          out << pad << "let " << tuple(n.outs) << " = " << n.fn << tuple(n.args) << " in\n";
          print_tgt(n.body, indent, out);
        } else if constexpr (std::is_same_v<T, TgtTupleLet>) {
          if (std::holds_alternative<TgtReturn>(n.rhs->node)) {
            out << pad << "let " << tuple(n.outs) << " = "
                << tuple(std::get<TgtReturn>(n.rhs->node).vars) << " in\n";
          } else {
            out << pad << "let " << tuple(n.outs) << " =\n";
            print_tgt(n.rhs, indent + 4, out);
            out << pad << "  in\n";
          }
          print_tgt(n.body, indent, out);
        } else {
          static_assert(std::is_same_v<T, TgtIf>);
          out << pad << "if " << n.cond << " then {\n";
          print_tgt(n.then_branch, indent + 2, out);
          out << pad << "} else {\n";
          print_tgt(n.else_branch, indent + 2, out);
          out << pad << "}\n";
        }
      },
      e->node);
}

std::string print_signature(const TargetFunType& sig) {
  std::ostringstream out;
  out << "<" << join(sig.quantified, ", ");
  if (!sig.constraints.empty()) {
    std::vector<std::string> cs;
    for (const auto& [a, b] : sig.constraints.pairs()) cs.push_back(a + "~" + b);
    out << " | " << join(cs, ", ");
  }
  out << ">";
  return out.str();
}

std::string qtype(const QType& t) { return "q(" + t.idx + ")"; }

}  // namespace

std::string print_source_expr(const SourceExprPtr& expr) {
  std::ostringstream out;
  print_src(expr, 0, out);
  return out.str();
}

std::string print_target_expr(const TargetExprPtr& expr) {
  std::ostringstream out;
  print_tgt(expr, 0, out);
  return out.str();
}

std::string print_source(const SourceProgram& program) {
  std::ostringstream out;
  for (const auto& def : program.defs) {
    out << "fun " << def.name << tuple(def.params) << " {\n";
    print_src(def.body, 2, out);
    out << "}\n\n";
  }
  out << "main {\n";
  print_src(program.entry, 2, out);
  out << "}\n";
  return out.str();
}

std::string print_target(const TargetProgram& program) {
  std::ostringstream out;
  for (const auto& def : program.defs) {
    out << "fun " << def.name << print_signature(def.signature) << "(";
    std::vector<std::string> params;
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      params.push_back(def.params[i] + ": " + qtype(def.signature.params[i]));
    }
    out << join(params, ", ") << ") -> (";
    std::vector<std::string> results;
    for (const auto& r : def.signature.results) results.push_back(qtype(r));
    out << join(results, ", ") << ") {\n";
    print_tgt(def.body, 2, out);
    out << "}\n\n";
  }
  out << "main {\n";
  if (!program.preamble.empty()) {
    out << "  qubits:";
    for (const auto& [var, idx] : program.preamble) out << " " << var << "@" << idx;
    out << "\n";
  }
  print_tgt(program.entry, 2, out);
  out << "}\n";
  return out.str();
}

std::string print_coupling_graph(const CouplingGraph& graph) {
  std::ostringstream out;
  out << "nodes:";
  for (const auto& n : graph.nodes()) out << " " << n;
  out << "\n";
  if (graph.edge_count() > 0) {
    out << "edges:";
    for (const auto& [a, b] : graph.edges()) out << " " << a << "-" << b;
    out << "\n";
  }
  return out.str();
}

std::string to_dot(const CouplingGraph& graph, const std::string& name) {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (const auto& n : graph.nodes()) out << "  \"" << n << "\";\n";
  for (const auto& [a, b] : graph.edges()) {
    out << "  \"" << a << "\" -- \"" << b << "\";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace qalloc
