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

#include "qalloc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace qalloc {

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Lt,
  Gt,
  Comma,
  Semi,
  Colon,
  Eq,
  At,
  Tilde,
  Arrow,
  Pipe,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Eq: return "'='";
    case Tok::At: return "'@'";
    case Tok::Tilde: return "'~'";
    case Tok::Arrow: return "'->'";
    case Tok::Pipe: return "'|'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& text, bool allow_reserved) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto span = [&]() { return Span{line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Span at = span();
    if (is_ident_start(c) || c == kReservedPrefix) {
      if (c == kReservedPrefix && !allow_reserved) {
        throw ParseError("names starting with '%' are reserved for the compiler", at);
      }
      std::size_t j = i + 1;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      if (j == i + 1 && c == kReservedPrefix) {
        throw ParseError("stray '%'", at);
      }
      out.push_back({Tok::Ident, text.substr(i, j - i), at});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", at});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '<': kind = Tok::Lt; break;
      case '>': kind = Tok::Gt; break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semi; break;
      case ':': kind = Tok::Colon; break;
      case '=': kind = Tok::Eq; break;
      case '@': kind = Tok::At; break;
      case '~': kind = Tok::Tilde; break;
      case '|': kind = Tok::Pipe; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", at);
    }
    out.push_back({kind, std::string(1, c), at});
    advance(1);
  }
  out.push_back({Tok::End, "", span()});
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {"fun",  "main",    "let",  "in",   "init",
                                           "discard", "cnot", "swap", "if",   "then",
                                           "else", "qubits",  "h"};
  return kw;
}

class Parser {
 public:
  Parser(const std::string& text, bool allow_reserved, const ParseOptions& opts)
      : tokens_(lex(text, allow_reserved)), opts_(opts) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t idx = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[idx];
  }

  Token next() {
    Token t = peek();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, Span span,
                         std::vector<std::string> expected = {}) const {
    throw ParseError(msg, span, std::move(expected));
  }

  Token expect(Tok kind) {
    Token t = peek();
    if (t.kind != kind) {
      fail("expected " + std::string(tok_name(kind)) + ", found '" + describe(t) + "'", t.span,
           {tok_name(kind)});
    }
    return next();
  }

  bool at_keyword(const std::string& kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && t.text == kw;
  }

  void expect_keyword(const std::string& kw) {
    Token t = peek();
    if (!at_keyword(kw)) {
      fail("expected '" + kw + "', found '" + describe(t) + "'", t.span, {kw});
    }
    next();
  }

  VarName expect_name(const char* what) {
    Token t = peek();
    if (t.kind != Tok::Ident) {
      fail(std::string("expected ") + what + ", found '" + describe(t) + "'", t.span,
           {"identifier"});
    }
    if (keywords().count(t.text)) {
      fail("keyword '" + t.text + "' cannot be used as " + what, t.span);
    }
    next();
    return t.text;
  }

  std::string describe(const Token& t) const {
    return t.kind == Tok::Ident ? t.text : tok_name(t.kind);
  }

  // "(" id ("," id)* ")" | "(" ")"
  std::vector<VarName> parse_idlist(const char* what, bool require_distinct) {
    expect(Tok::LParen);
    std::vector<VarName> ids;
    if (peek().kind != Tok::RParen) {
      ids.push_back(expect_name(what));
      while (peek().kind == Tok::Comma) {
        next();
        ids.push_back(expect_name(what));
      }
    }
    Span close = peek().span;
    expect(Tok::RParen);
    if (require_distinct) {
      std::set<VarName> seen;
      for (const auto& id : ids) {
        if (!seen.insert(id).second) {
          fail("duplicate name '" + id + "' in binder list", close);
        }
      }
    }
    return ids;
  }

  bool hadamard_enabled() const { return opts_.enable_hadamard; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ParseOptions opts_;
};

// --------------------------------------------------------------------------
// Source language.
// --------------------------------------------------------------------------

SourceExprPtr parse_src_expr(Parser& p);

SourceExprPtr parse_src_let(Parser& p) {
  Span span = p.peek().span;
  p.expect_keyword("let");
  if (p.peek().kind == Tok::Ident && !p.at_keyword("let")) {
    // let x = init () in e   /   let x = h(y) in e
    VarName bound = p.expect_name("a variable");
    p.expect(Tok::Eq);
    if (p.at_keyword("init")) {
      p.next();
      p.expect(Tok::LParen);
      p.expect(Tok::RParen);
      p.expect_keyword("in");
      return src_init(bound, parse_src_expr(p), span);
    }
    if (p.at_keyword("h")) {
      if (!p.hadamard_enabled()) {
        p.fail("'h' is only available with the hadamard extension enabled", p.peek().span);
      }
      p.next();
      p.expect(Tok::LParen);
      VarName in = p.expect_name("a variable");
      p.expect(Tok::RParen);
      p.expect_keyword("in");
      return src_h(bound, in, parse_src_expr(p), span);
    }
    p.fail("expected 'init' after '='", p.peek().span, {"init"});
  }
  std::vector<VarName> outs = p.parse_idlist("a variable", /*require_distinct=*/true);
  p.expect(Tok::Eq);
  const Token& rhs_tok = p.peek();
  if (rhs_tok.kind == Tok::Ident && !keywords().count(rhs_tok.text)) {
    // function call
    FunName fn = p.expect_name("a function name");
    std::vector<VarName> args = p.parse_idlist("an argument", /*require_distinct=*/false);
    p.expect_keyword("in");
    return src_call(std::move(outs), fn, std::move(args), parse_src_expr(p), span);
  }
  if (p.at_keyword("cnot")) {
    p.next();
    if (outs.size() != 2) {
      p.fail("cnot binds exactly two variables", span);
    }
    std::vector<VarName> ins = p.parse_idlist("an argument", false);
    if (ins.size() != 2) {
      p.fail("cnot takes exactly two arguments", span);
    }
    p.expect_keyword("in");
    return src_cnot({outs[0], outs[1]}, {ins[0], ins[1]}, parse_src_expr(p), span);
  }
  // nested expression
  SourceExprPtr rhs = parse_src_expr(p);
  p.expect_keyword("in");
  return src_tuple_let(std::move(outs), std::move(rhs), parse_src_expr(p), span);
}

SourceExprPtr parse_src_expr(Parser& p) {
  const Token& t = p.peek();
  if (t.kind == Tok::LParen) {
    Span span = t.span;
    std::vector<VarName> vars = p.parse_idlist("a variable", false);
    return src_return(std::move(vars), span);
  }
  if (p.at_keyword("let")) return parse_src_let(p);
  if (p.at_keyword("discard")) {
    Span span = t.span;
    p.next();
    VarName var = p.expect_name("a variable");
    p.expect(Tok::Semi);
    return src_discard(var, parse_src_expr(p), span);
  }
  if (p.at_keyword("if")) {
    Span span = t.span;
    p.next();
    VarName cond = p.expect_name("a variable");
    p.expect_keyword("then");
    p.expect(Tok::LBrace);
    SourceExprPtr then_branch = parse_src_expr(p);
    p.expect(Tok::RBrace);
    p.expect_keyword("else");
    p.expect(Tok::LBrace);
    SourceExprPtr else_branch = parse_src_expr(p);
    p.expect(Tok::RBrace);
    return src_if(cond, std::move(then_branch), std::move(else_branch), span);
  }
  p.fail("expected an expression, found '" + p.describe(t) + "'", t.span,
         {"(", "let", "discard", "if"});
}

// --------------------------------------------------------------------------
// Target language.
// --------------------------------------------------------------------------

TargetExprPtr parse_tgt_expr(Parser& p);

TargetExprPtr parse_tgt_let(Parser& p) {
  Span span = p.peek().span;
  p.expect_keyword("let");
  if (p.peek().kind == Tok::Ident) {
    // let x = h(y) in e  (the only single-binder let in the target)
    VarName bound = p.expect_name("a variable");
    p.expect(Tok::Eq);
    if (p.at_keyword("h")) {
      if (!p.hadamard_enabled()) {
        p.fail("'h' is only available with the hadamard extension enabled", p.peek().span);
      }
      p.next();
      p.expect(Tok::LParen);
      VarName in = p.expect_name("a variable");
      p.expect(Tok::RParen);
      p.expect_keyword("in");
      return tgt_h(bound, in, parse_tgt_expr(p), span);
    }
    p.fail("expected a gate application after '='", p.peek().span);
  }
  std::vector<VarName> outs = p.parse_idlist("a variable", /*require_distinct=*/true);
  p.expect(Tok::Eq);
  const Token& rhs_tok = p.peek();
  if (p.at_keyword("cnot") || p.at_keyword("swap")) {
    bool is_cnot = p.at_keyword("cnot");
    p.next();
    if (outs.size() != 2) {
      p.fail(std::string(is_cnot ? "cnot" : "swap") + " binds exactly two variables", span);
    }
    std::vector<VarName> ins = p.parse_idlist("an argument", false);
    if (ins.size() != 2) {
      p.fail(std::string(is_cnot ? "cnot" : "swap") + " takes exactly two arguments", span);
    }
    p.expect_keyword("in");
    auto body = parse_tgt_expr(p);
    return is_cnot ? tgt_cnot({outs[0], outs[1]}, {ins[0], ins[1]}, std::move(body), span)
                   : tgt_swap({outs[0], outs[1]}, {ins[0], ins[1]}, std::move(body), span);
  }
  if (rhs_tok.kind == Tok::Ident && !keywords().count(rhs_tok.text)) {
    FunName fn = p.expect_name("a function name");
    std::vector<VarName> args = p.parse_idlist("an argument", false);
    p.expect_keyword("in");
    return tgt_call(std::move(outs), fn, std::move(args), parse_tgt_expr(p), span);
  }
  TargetExprPtr rhs = parse_tgt_expr(p);
  p.expect_keyword("in");
  return tgt_tuple_let(std::move(outs), std::move(rhs), parse_tgt_expr(p), span);
}

TargetExprPtr parse_tgt_expr(Parser& p) {
  const Token& t = p.peek();
  if (t.kind == Tok::LParen) {
    Span span = t.span;
    std::vector<VarName> vars = p.parse_idlist("a variable", false);
    return tgt_return(std::move(vars), span);
  }
  if (p.at_keyword("init")) {
    Span span = t.span;
    p.next();
    VarName var = p.expect_name("a variable");
    p.expect(Tok::Semi);
    return tgt_init(var, parse_tgt_expr(p), span);
  }
  if (p.at_keyword("let")) return parse_tgt_let(p);
  if (p.at_keyword("if")) {
    Span span = t.span;
    p.next();
    VarName cond = p.expect_name("a variable");
    p.expect_keyword("then");
    p.expect(Tok::LBrace);
    TargetExprPtr then_branch = parse_tgt_expr(p);
    p.expect(Tok::RBrace);
    p.expect_keyword("else");
    p.expect(Tok::LBrace);
    TargetExprPtr else_branch = parse_tgt_expr(p);
    p.expect(Tok::RBrace);
    return tgt_if(cond, std::move(then_branch), std::move(else_branch), span);
  }
  p.fail("expected an expression, found '" + p.describe(t) + "'", t.span,
         {"(", "init", "let", "if"});
}

QType parse_qtype(Parser& p) {
  Token t = p.peek();
  if (t.kind != Tok::Ident || t.text != "q") {
    p.fail("expected a qubit type 'q(<qidx>)'", t.span, {"q"});
  }
  p.next();
  p.expect(Tok::LParen);
  Qidx idx = p.expect_name("a qidx");
  p.expect(Tok::RParen);
  return QType{idx};
}

TargetFunDef parse_tgt_fundef(Parser& p) {
  TargetFunDef def;
  def.span = p.peek().span;
  p.expect_keyword("fun");
  def.name = p.expect_name("a function name");
  p.expect(Tok::Lt);
  TargetFunType sig;
  if (p.peek().kind != Tok::Gt && p.peek().kind != Tok::Pipe) {
    sig.quantified.push_back(p.expect_name("a qidx"));
    while (p.peek().kind == Tok::Comma) {
      p.next();
      sig.quantified.push_back(p.expect_name("a qidx"));
    }
  }
  {
    std::set<Qidx> seen;
    for (const auto& q : sig.quantified) {
      if (!seen.insert(q).second) {
        p.fail("duplicate quantified qidx '" + q + "'", def.span);
      }
    }
  }
  if (p.peek().kind == Tok::Pipe) {
    p.next();
    while (true) {
      Qidx a = p.expect_name("a qidx");
      p.expect(Tok::Tilde);
      Qidx b = p.expect_name("a qidx");
      Span at = p.peek().span;
      try {
        sig.constraints.add(a, b);
      } catch (const Error& e) {
        p.fail(e.what(), at);
      }
      if (p.peek().kind != Tok::Comma) break;
      p.next();
    }
  }
  p.expect(Tok::Gt);
  p.expect(Tok::LParen);
  if (p.peek().kind != Tok::RParen) {
    while (true) {
      VarName param = p.expect_name("a parameter");
      p.expect(Tok::Colon);
      sig.params.push_back(parse_qtype(p));
      def.params.push_back(param);
      if (p.peek().kind != Tok::Comma) break;
      p.next();
    }
  }
  p.expect(Tok::RParen);
  {
    std::set<VarName> seen;
    for (const auto& x : def.params) {
      if (!seen.insert(x).second) p.fail("duplicate parameter '" + x + "'", def.span);
    }
  }
  p.expect(Tok::Arrow);
  p.expect(Tok::LParen);
  if (p.peek().kind != Tok::RParen) {
    sig.results.push_back(parse_qtype(p));
    while (p.peek().kind == Tok::Comma) {
      p.next();
      sig.results.push_back(parse_qtype(p));
    }
  }
  p.expect(Tok::RParen);
  p.expect(Tok::LBrace);
  def.body = parse_tgt_expr(p);
  p.expect(Tok::RBrace);
  def.signature = std::move(sig);
  return def;
}

}  // namespace

SourceProgram parse_source(const std::string& text, const ParseOptions& opts) {
  Parser p(text, /*allow_reserved=*/false, opts);
  SourceProgram program;
  std::set<FunName> names;
  while (p.at_keyword("fun")) {
    SourceFunDef def;
    def.span = p.peek().span;
    p.next();
    def.name = p.expect_name("a function name");
    if (!names.insert(def.name).second) {
      p.fail("duplicate function name '" + def.name + "'", def.span);
    }
    def.params = p.parse_idlist("a parameter", /*require_distinct=*/true);
    p.expect(Tok::LBrace);
    def.body = parse_src_expr(p);
    p.expect(Tok::RBrace);
    program.defs.push_back(std::move(def));
  }
  p.expect_keyword("main");
  p.expect(Tok::LBrace);
  program.entry = parse_src_expr(p);
  p.expect(Tok::RBrace);
  Token end = p.peek();
  if (end.kind != Tok::End) {
    p.fail("unexpected trailing input '" + p.describe(end) + "'", end.span);
  }
  return program;
}

TargetProgram parse_target(const std::string& text, const ParseOptions& opts) {
  Parser p(text, /*allow_reserved=*/true, opts);
  TargetProgram program;
  std::set<FunName> names;
  while (p.at_keyword("fun")) {
    TargetFunDef def = parse_tgt_fundef(p);
    if (!names.insert(def.name).second) {
      p.fail("duplicate function name '" + def.name + "'", def.span);
    }
    program.defs.push_back(std::move(def));
  }
  p.expect_keyword("main");
  p.expect(Tok::LBrace);
  if (p.at_keyword("qubits")) {
    p.next();
    p.expect(Tok::Colon);
    std::set<VarName> vars;
    while (p.peek().kind == Tok::Ident && !keywords().count(p.peek().text)) {
      Span at = p.peek().span;
      VarName var = p.expect_name("a variable");
      p.expect(Tok::At);
      Qidx idx = p.expect_name("a qidx");
      if (!vars.insert(var).second) {
        p.fail("duplicate variable '" + var + "' in qubits preamble", at);
      }
      program.preamble.emplace_back(var, idx);
    }
  }
  program.entry = parse_tgt_expr(p);
  p.expect(Tok::RBrace);
  Token end = p.peek();
  if (end.kind != Tok::End) {
    p.fail("unexpected trailing input '" + p.describe(end) + "'", end.span);
  }
  return program;
}

CouplingGraph parse_coupling_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<Qidx> nodes;
  std::vector<std::pair<Qidx, Qidx>> edges;
  bool saw_nodes = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "nodes:") {
      if (saw_nodes) {
        throw ParseError("duplicate 'nodes:' line", {lineno, 1});
      }
      saw_nodes = true;
      std::string id;
      while (ls >> id) nodes.push_back(id);
    } else if (head == "edges:") {
      if (!saw_nodes) {
        throw ParseError("'edges:' before 'nodes:'", {lineno, 1});
      }
      std::string pair;
      while (ls >> pair) {
        auto dash = pair.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 == pair.size()) {
          throw ParseError("malformed edge '" + pair + "', expected '<id>-<id>'", {lineno, 1});
        }
        edges.emplace_back(pair.substr(0, dash), pair.substr(dash + 1));
      }
    } else {
      throw ParseError("expected 'nodes:' or 'edges:', found '" + head + "'", {lineno, 1});
    }
  }
  if (!saw_nodes) {
    throw ParseError("missing 'nodes:' line", {lineno, 1});
  }
  CouplingGraph graph;
  try {
    graph = CouplingGraph(std::move(nodes), std::move(edges));
  } catch (const Error& e) {
    throw ParseError(e.what(), {1, 1});
  }
  if (!graph.is_connected()) {
    throw ParseError("coupling graph is not connected", {1, 1});
  }
  return graph;
}

}  // namespace qalloc
