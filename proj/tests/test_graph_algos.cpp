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

#include <doctest.h>

#include "helpers.hpp"
#include "qalloc/fuzz.hpp"
#include "qalloc/graph_algos.hpp"

using namespace qalloc;
using qalloc::test::throws_kind;

TEST_CASE("articulation points") {
  CHECK(articulation_points(qalloc::test::qx2()) == std::set<Qidx>{"q2"});
  CHECK(articulation_points(qalloc::test::triangle()).empty());
  CHECK(articulation_points(qalloc::test::path({"a", "b", "c"})) == std::set<Qidx>{"b"});
  CHECK(throws_kind(ErrorKind::DisconnectedInput, [] {
    articulation_points(CouplingGraph({"a", "b"}, {}));
  }));
}

TEST_CASE("fast articulation points agree with the naive oracle") {
  Rng rng(41);
  for (int i = 0; i < 60; ++i) {
    CouplingGraph g = random_connected_graph(rng, 2 + rng() % 30, 0.15);
    CHECK(articulation_points(g) == articulation_points_naive(g));
  }
}

namespace {

void check_chain_invariants(const SubgraphChain& chain, const CouplingGraph& g) {
  REQUIRE(chain.size() == g.node_count());
  for (std::size_t k = 1; k <= chain.size(); ++k) {
    const CouplingGraph& gk = chain.at_size(k);
    CHECK(gk.node_count() == k);
    CHECK(gk.is_connected());
    if (k < chain.size()) {
      const CouplingGraph& next = chain.at_size(k + 1);
      std::set<Qidx> sub(gk.nodes().begin(), gk.nodes().end());
      std::set<Qidx> super(next.nodes().begin(), next.nodes().end());
      for (const auto& n : sub) CHECK(super.count(n));
      // Edges are exactly the larger element's edges restricted down.
      CHECK(next.induced(sub) == gk);
    }
  }
  CHECK(chain.at_size(g.node_count()) == g);
}

}  // namespace

TEST_CASE("QX2 chain: removal order and the triangle workspace") {
  SubgraphChain chain = construct_subgraphs(qalloc::test::qx2());
  CHECK(chain.removal_order == std::vector<Qidx>{"q0", "q1", "q2", "q3", "q4"});
  CHECK(chain.at_size(3) == qalloc::test::qx2().induced({"q2", "q3", "q4"}));
  check_chain_invariants(chain, qalloc::test::qx2());
}

TEST_CASE("path chain removes endpoints in name order") {
  CouplingGraph g = qalloc::test::path({"a", "b", "c"});
  SubgraphChain chain = construct_subgraphs(g);
  CHECK(chain.removal_order == std::vector<Qidx>{"a", "b", "c"});
  CHECK(chain.at_size(1).nodes() == std::vector<Qidx>{"c"});
  CHECK(chain.at_size(2) == g.induced({"b", "c"}));
}

TEST_CASE("single-node chain") {
  SubgraphChain chain = construct_subgraphs(CouplingGraph({"solo"}, {}));
  CHECK(chain.size() == 1);
  CHECK(chain.at_size(1).nodes() == std::vector<Qidx>{"solo"});
}

TEST_CASE("chain invariants hold on fuzzed graphs") {
  Rng rng(42);
  for (int i = 0; i < 40; ++i) {
    CouplingGraph g = random_connected_graph(rng, 2 + rng() % 30, 0.2);
    check_chain_invariants(construct_subgraphs(g), g);
  }
}

TEST_CASE("subgraph assignment") {
  SubgraphChain chain = construct_subgraphs(qalloc::test::qx2());
  SUBCASE("two params plus budget one get the triangle") {
    SrcFunEnv theta{{"f", SourceFunType{{SimpleType::Qbit, SimpleType::Qbit}, 1,
                                        {SimpleType::Qbit, SimpleType::Qbit}}}};
    SubgraphAssignment a = assign_subgraphs(theta, chain);
    CHECK(a.workspace.at("f") == chain.at_size(3));
    CHECK(a.clamped.empty());
  }
  SUBCASE("a nullary zero-budget function is clamped to G1 and flagged") {
    SrcFunEnv theta{{"z", SourceFunType{{}, 0, {}}}};
    SubgraphAssignment a = assign_subgraphs(theta, chain);
    CHECK(a.workspace.at("z") == chain.at_size(1));
    CHECK(a.clamped == std::vector<FunName>{"z"});
  }
  SUBCASE("too large a function is a device error") {
    SrcFunEnv theta{{"big", SourceFunType{TupleType(3, SimpleType::Qbit), 3,
                                          TupleType(3, SimpleType::Qbit)}}};
    CHECK(throws_kind(ErrorKind::DeviceTooSmall, [&] { assign_subgraphs(theta, chain); }));
  }
}

TEST_CASE("subgraph isomorphism") {
  SUBCASE("chain nesting gives the identity embedding") {
    SubgraphChain chain = construct_subgraphs(qalloc::test::qx2());
    Embedding phi = subgraph_isomorphism(chain.at_size(5), chain.at_size(3));
    for (const auto& [from, to] : phi) CHECK(from == to);
    CHECK(phi.size() == 3);
  }
  SUBCASE("a single edge into a triangle embeds first-by-name") {
    CouplingGraph pattern({"p", "r"}, {{"p", "r"}});
    Embedding phi = subgraph_isomorphism(qalloc::test::triangle(), pattern);
    CHECK(phi == Embedding{{"p", "a"}, {"r", "b"}});
  }
  SUBCASE("a triangle has no embedding into a path") {
    CHECK(throws_kind(ErrorKind::NoEmbedding, [] {
      subgraph_isomorphism(qalloc::test::path({"a", "b", "c"}), qalloc::test::triangle());
    }));
  }
  SUBCASE("embeddings preserve pattern edges") {
    Rng rng(43);
    for (int i = 0; i < 30; ++i) {
      CouplingGraph host = random_connected_graph(rng, 6, 0.5);
      SubgraphChain chain = construct_subgraphs(host);
      const CouplingGraph& pattern = chain.at_size(3);
      Embedding phi = subgraph_isomorphism(host, pattern);
      for (const auto& [a, b] : pattern.edges()) {
        CHECK(host.has_edge(phi.at(a), phi.at(b)));
      }
    }
  }
}

TEST_CASE("shortest paths") {
  CHECK(shortest_path(qalloc::test::qx2(), "q1", "q1") == std::vector<Qidx>{"q1"});
  CHECK(shortest_path(qalloc::test::qx2(), "q1", "q4") ==
        std::vector<Qidx>{"q1", "q2", "q4"});
  CHECK(shortest_path(qalloc::test::path({"a", "b", "c"}), "a", "c") ==
        std::vector<Qidx>{"a", "b", "c"});
}

TEST_CASE("token swapping: identity maps need no swaps") {
  CouplingGraph g = qalloc::test::path({"a", "b", "c"});
  TokenMap id{{"a", "a"}, {"b", "b"}, {"c", "c"}};
  CHECK(token_swapping_approx(g, id).empty());
  CHECK(token_swapping_exact(g, id).empty());
}

TEST_CASE("token swapping: path endpoint exchange costs three swaps") {
  CouplingGraph g = qalloc::test::path({"a", "b", "c"});
  TokenMap p{{"a", "c"}, {"c", "a"}};
  SwapSequence exact = token_swapping_exact(g, p);
  CHECK(exact.size() == 3);
  SwapSequence approx = token_swapping_approx(g, p);
  std::map<Qidx, Qidx> final_pos = token_positions_after(g, approx);
  CHECK(final_pos.at("a") == "c");
  CHECK(final_pos.at("c") == "a");
}

TEST_CASE("token swapping: one swap moves q0's token next to q2") {
  CouplingGraph g = qalloc::test::path({"q0", "q1", "q2"});
  SwapSequence psi = token_swapping_approx(g, TokenMap{{"q0", "q1"}});
  REQUIRE(psi.size() == 1);
  CHECK(std::min(psi[0].first, psi[0].second) == "q0");
  CHECK(std::max(psi[0].first, psi[0].second) == "q1");
}

TEST_CASE("token swapping: rotating a 4-cycle optimally costs three swaps") {
  CouplingGraph g({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}});
  TokenMap rotate{{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}};
  CHECK(token_swapping_exact(g, rotate).size() == 3);
}

TEST_CASE("token swapping rejects bad maps") {
  CouplingGraph g = qalloc::test::path({"a", "b"});
  CHECK(throws_kind(ErrorKind::InvalidMap, [&] {
    token_swapping_approx(g, TokenMap{{"a", "ghost"}});
  }));
  CHECK(throws_kind(ErrorKind::InvalidMap, [&] {
    token_swapping_approx(g, TokenMap{{"a", "b"}, {"b", "b"}});
  }));
  CHECK(throws_kind(ErrorKind::TooLarge, [] {
    Rng rng(1);
    CouplingGraph big = random_connected_graph(rng, 9, 0.2);
    token_swapping_exact(big, {});
  }));
}

TEST_CASE("approximate token swapping: replay correctness and ratio") {
  Rng rng(44);
  for (int i = 0; i < 60; ++i) {
    std::size_t n = 3 + rng() % 5;  // up to 7 nodes: the exact oracle applies
    CouplingGraph g = random_connected_graph(rng, n, 0.3);
    // Random partial injection.
    std::vector<Qidx> sources = g.nodes(), targets = g.nodes();
    for (std::size_t j = sources.size(); j > 1; --j) {
      std::swap(targets[j - 1], targets[rng() % j]);
    }
    TokenMap p;
    for (std::size_t j = 0; j < n; ++j) {
      if (rng() % 100 < 60) p[sources[j]] = targets[j];
    }
    SwapSequence approx = token_swapping_approx(g, p);
    std::map<Qidx, Qidx> final_pos = token_positions_after(g, approx);
    for (const auto& [v, w] : p) CHECK(final_pos.at(v) == w);
    SwapSequence exact = token_swapping_exact(g, p);
    std::map<Qidx, Qidx> exact_pos = token_positions_after(g, exact);
    for (const auto& [v, w] : p) CHECK(exact_pos.at(v) == w);
    CHECK(approx.size() <= 4 * exact.size());
    // Every emitted pair is an edge (token_positions_after throws otherwise).
  }
}
