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

#include "qalloc/fuzz.hpp"

#include <algorithm>

#include "qalloc/alloc.hpp"
#include "qalloc/check_source.hpp"
#include "qalloc/check_target.hpp"
#include "qalloc/sim.hpp"

namespace qalloc {

namespace {

// All draws go through these helpers so the byte stream of decisions is
// fixed by the seed alone, independent of library distribution internals.
std::uint64_t draw(Rng& rng, std::uint64_t bound) { return bound ? rng() % bound : 0; }

int draw_int(Rng& rng, int lo, int hi) {  // inclusive
  if (hi <= lo) return lo;
  return lo + static_cast<int>(draw(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

bool chance(Rng& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

template <typename T>
void shuffle_vec(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[draw(rng, i)]);
  }
}

struct GenState {
  int next_var = 0;
  std::vector<VarName> retired;

  VarName fresh_var(Rng& rng, const SrcTypeEnv& gamma) {
    // Occasionally rebind a previously discarded name; this is legal in the
    // source and exercises the allocator's parked-name handling.
    if (!retired.empty() && chance(rng, 0.2)) {
      VarName candidate = retired[draw(rng, retired.size())];
      if (!gamma.count(candidate)) return candidate;
    }
    return "x" + std::to_string(next_var++);
  }
};

std::size_t result_arity(const SourceExprPtr& e) {
  return std::visit(
      [&](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SrcReturn>) {
          return n.vars.size();
        } else if constexpr (std::is_same_v<T, SrcIf>) {
          return result_arity(n.then_branch);
        } else {
          return result_arity(n.body);
        }
      },
      e->node);
}

std::vector<VarName> pick_distinct(Rng& rng, const SrcTypeEnv& gamma, std::size_t count) {
  std::vector<VarName> pool = env_domain(gamma);
  shuffle_vec(rng, pool);
  pool.resize(count);
  return pool;
}

SourceExprPtr gen_expr(Rng& rng, GenState& st, const SrcFunEnv& theta, int budget,
                       SrcTypeEnv gamma, int depth) {
  enum Op { Ret, Init, Disc, Cnot, Call, Let, If };
  std::vector<Op> options;
  if (depth > 0) {
    auto add = [&](Op op, int weight) { options.insert(options.end(), weight, op); };
    if (budget >= 1) add(Init, 4);
    if (!gamma.empty()) add(Disc, 2);
    if (gamma.size() >= 2) add(Cnot, 4);
    for (const auto& [name, sig] : theta) {
      if (budget >= sig.budget && gamma.size() >= sig.params.size()) {
        add(Call, 3);
        break;
      }
    }
    add(Let, 2);
    if (!gamma.empty()) add(If, 2);
    add(Ret, 1);
  }
  Op op = options.empty() ? Ret : options[draw(rng, options.size())];

  switch (op) {
    case Ret: {
      std::vector<VarName> vars = env_domain(gamma);
      shuffle_vec(rng, vars);
      return src_return(std::move(vars));
    }
    case Init: {
      VarName x = st.fresh_var(rng, gamma);
      SrcTypeEnv inner = gamma;
      inner.emplace(x, SimpleType::Qbit);
      return src_init(x, gen_expr(rng, st, theta, budget - 1, std::move(inner), depth - 1));
    }
    case Disc: {
      VarName x = pick_distinct(rng, gamma, 1)[0];
      SrcTypeEnv inner = gamma;
      inner.erase(x);
      st.retired.push_back(x);
      return src_discard(x,
                         gen_expr(rng, st, theta, budget + 1, std::move(inner), depth - 1));
    }
    case Cnot: {
      auto ins = pick_distinct(rng, gamma, 2);
      SrcTypeEnv inner = gamma;
      inner.erase(ins[0]);
      inner.erase(ins[1]);
      VarName o1, o2;
      if (chance(rng, 0.3)) {  // rebind the same names
        o1 = ins[0];
        o2 = ins[1];
      } else {
        o1 = st.fresh_var(rng, inner);
        inner.emplace(o1, SimpleType::Qbit);
        o2 = st.fresh_var(rng, inner);
        inner.erase(o1);
      }
      inner.emplace(o1, SimpleType::Qbit);
      inner.emplace(o2, SimpleType::Qbit);
      return src_cnot({o1, o2}, {ins[0], ins[1]},
                      gen_expr(rng, st, theta, budget, std::move(inner), depth - 1));
    }
    case Call: {
      std::vector<FunName> usable;
      for (const auto& [name, sig] : theta) {
        if (budget >= sig.budget && gamma.size() >= sig.params.size()) usable.push_back(name);
      }
      const FunName& fn = usable[draw(rng, usable.size())];
      const SourceFunType& sig = theta.at(fn);
      std::vector<VarName> args = pick_distinct(rng, gamma, sig.params.size());
      SrcTypeEnv inner = gamma;
      for (const auto& a : args) inner.erase(a);
      std::vector<VarName> outs;
      for (std::size_t i = 0; i < sig.results.size(); ++i) {
        VarName o = st.fresh_var(rng, inner);
        inner.emplace(o, SimpleType::Qbit);
        outs.push_back(o);
      }
      int inner_budget = budget - static_cast<int>(sig.results.size()) +
                         static_cast<int>(sig.params.size());
      return src_call(std::move(outs), fn, std::move(args),
                      gen_expr(rng, st, theta, inner_budget, std::move(inner), depth - 1));
    }
    case Let: {
      SrcTypeEnv gamma1, gamma2;
      for (const auto& [v, t] : gamma) {
        (chance(rng, 0.5) ? gamma1 : gamma2).emplace(v, t);
      }
      SourceExprPtr rhs = gen_expr(rng, st, theta, budget, gamma1, depth - 1);
      std::size_t n = result_arity(rhs);
      SrcTypeEnv inner = gamma2;
      std::vector<VarName> outs;
      for (std::size_t i = 0; i < n; ++i) {
        VarName o = st.fresh_var(rng, inner);
        inner.emplace(o, SimpleType::Qbit);
        outs.push_back(o);
      }
      int inner_budget = budget + static_cast<int>(gamma1.size()) - static_cast<int>(n);
      return src_tuple_let(std::move(outs), std::move(rhs),
                           gen_expr(rng, st, theta, inner_budget, std::move(inner), depth - 1));
    }
    case If:
    default: {
      VarName cond = pick_distinct(rng, gamma, 1)[0];
      SourceExprPtr then_branch = gen_expr(rng, st, theta, budget, gamma, depth - 1);
      std::size_t want = result_arity(then_branch);
      SourceExprPtr else_branch;
      for (int attempt = 0; attempt < 8; ++attempt) {
        else_branch = gen_expr(rng, st, theta, budget, gamma, depth - 1);
        if (result_arity(else_branch) == want) break;
        else_branch = nullptr;
      }
      if (!else_branch) else_branch = then_branch;  // if x then e else e is fine
      return src_if(cond, std::move(then_branch), std::move(else_branch));
    }
  }
}

}  // namespace

CouplingGraph random_connected_graph(Rng& rng, std::size_t nodes, double extra_edge_prob) {
  std::vector<Qidx> names;
  for (std::size_t i = 0; i < nodes; ++i) names.push_back("q" + std::to_string(i));
  std::vector<std::pair<Qidx, Qidx>> edges;
  for (std::size_t i = 1; i < nodes; ++i) {
    edges.emplace_back(names[draw(rng, i)], names[i]);
  }
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j = i + 1; j < nodes; ++j) {
      if (chance(rng, extra_edge_prob)) edges.emplace_back(names[i], names[j]);
    }
  }
  return CouplingGraph(std::move(names), std::move(edges));
}

SourceProgram random_program(Rng& rng, const FuzzConfig& cfg, int budget_cap) {
  SourceProgram program;
  GenState st;
  SrcFunEnv theta;
  int n_funs = draw_int(rng, 0, cfg.max_funs);
  for (int i = 0; i < n_funs; ++i) {
    SourceFunDef def;
    def.name = "f" + std::to_string(i);
    int arity = draw_int(rng, 0, std::min(2, budget_cap));
    int budget = draw_int(rng, 0, std::min(2, budget_cap - arity));
    SrcTypeEnv gamma;
    for (int p = 0; p < arity; ++p) {
      VarName v = "x" + std::to_string(st.next_var++);
      def.params.push_back(v);
      gamma.emplace(v, SimpleType::Qbit);
    }
    if (cfg.allow_recursion && arity >= 1 && chance(rng, 0.15)) {
      // Self-recursive identity: well typed, diverges at runtime.
      std::vector<VarName> outs;
      SrcTypeEnv inner;
      for (int p = 0; p < arity; ++p) {
        VarName o = "x" + std::to_string(st.next_var++);
        outs.push_back(o);
        inner.emplace(o, SimpleType::Qbit);
      }
      def.body = src_call(outs, def.name, def.params, src_return(outs));
    } else {
      def.body =
          gen_expr(rng, st, theta, budget, std::move(gamma), draw_int(rng, 1, cfg.max_depth));
    }
    // Later generation must see the exact signature the checker will infer.
    program.defs.push_back(def);
    theta = check_fundefs(program.defs);
  }
  int entry_budget = draw_int(rng, 1, std::max(1, std::min(cfg.max_qubits, budget_cap)));
  program.entry =
      gen_expr(rng, st, theta, entry_budget, {}, draw_int(rng, 1, cfg.max_depth));
  return program;
}

GeneratedCase generate_case(Rng& rng, const FuzzConfig& cfg) {
  std::size_t nodes = static_cast<std::size_t>(
      draw_int(rng, cfg.graph_min_nodes, cfg.graph_max_nodes));
  GeneratedCase out{SourceProgram{}, random_connected_graph(rng, nodes, cfg.extra_edge_prob)};
  out.program = random_program(rng, cfg, static_cast<int>(nodes));
  return out;
}

FuzzCaseOutcome evaluate_case(const GeneratedCase& gen, bool semantic_checks,
                              std::size_t fuel) {
  FuzzCaseOutcome out;
  try {
    out.minimal_budget = minimal_entry_budget(gen.program);
    CheckedProgram checked =
        check_program(gen.program, static_cast<int>(gen.graph.node_count()));
    AllocResult alloc = qubit_alloc(checked, gen.graph);
    out.type_preservation = check_program_tgt(alloc.program, gen.graph).ok();

    // Divergent recursive programs burn their whole fuel with linearly
    // growing expressions; a shorter leash is plenty to witness soundness.
    RunReport run = run_source(gen.program, static_cast<std::size_t>(out.minimal_budget),
                               std::min<std::size_t>(fuel, 2000));
    out.source_soundness =
        std::none_of(run.stuck.begin(), run.stuck.end(), [](const StuckReport& s) {
          return s.kind == ErrorKind::StuckNoFreeQubit;
        });

    if (out.minimal_budget >= 1) {
      out.mutation_rejected = false;
      try {
        check_program(gen.program, out.minimal_budget - 1);
      } catch (const Error& e) {
        out.mutation_rejected = e.kind() == ErrorKind::BudgetExceeded;
      }
    }

    if (semantic_checks) {
      out.semantics_checked = true;
      PreservationReport report =
          check_semantic_preservation(gen.program, alloc.program, gen.graph, fuel);
      out.semantics_preserved = report.ok();
      for (const auto& b : report.branches) {
        if (b.needed_fallback_permutation) ++out.fallback_branches;
      }
    }
  } catch (const Error& e) {
    out.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
  }
  return out;
}

}  // namespace qalloc
