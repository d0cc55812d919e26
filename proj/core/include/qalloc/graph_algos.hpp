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

#pragma once

#include <map>
#include <set>
#include <vector>

#include "qalloc/ast.hpp"
#include "qalloc/graph.hpp"

namespace qalloc {

// Vertices whose removal disconnects the graph. DFS low-link, O(V + E).
// Throws Error(DisconnectedInput) if the graph is not connected.
std::set<Qidx> articulation_points(const CouplingGraph& graph);

// Remove-a-vertex-and-BFS oracle for the fast implementation. Quadratic;
// test and verification use only.
std::set<Qidx> articulation_points_naive(const CouplingGraph& graph);

// Nested connected subgraphs G1 ⊆ ... ⊆ Gn with |V(Gi)| = i, built by
// repeatedly deleting a non-articulation vertex of minimum degree (ties by
// name). graphs[k-1] is Gk; removal_order lists the deleted vertices, the
// vertex removed from Gn first.
struct SubgraphChain {
  std::vector<CouplingGraph> graphs;
  std::vector<Qidx> removal_order;

  const CouplingGraph& at_size(std::size_t k) const { return graphs.at(k - 1); }
  std::size_t size() const { return graphs.size(); }
};

SubgraphChain construct_subgraphs(const CouplingGraph& graph);

// f : T1 --N--> T2 gets the chain element of size N + |T1| as its workspace.
// A nullary zero-budget function would ask for the empty G0; the chain
// starts at G1, so such functions are clamped to G1 and flagged.
struct SubgraphAssignment {
  std::map<FunName, CouplingGraph> workspace;
  std::vector<FunName> clamped;
};

SubgraphAssignment assign_subgraphs(const SrcFunEnv& theta, const SubgraphChain& chain);

// Injective map pattern -> host preserving pattern edges (a monomorphism,
// not necessarily induced). Identity fast path when the pattern is literally
// contained in the host (the chain-nesting case); deterministic name-ordered
// backtracking otherwise. Throws Error(NoEmbedding).
using Embedding = std::map<Qidx, Qidx>;
Embedding subgraph_isomorphism(const CouplingGraph& host, const CouplingGraph& pattern);

// p maps a vertex to the destination of the token that starts there.
// The returned sequence uses only edges of `graph`; replaying it left to
// right moves every token from v to p(v) for v in dom(p).
using TokenMap = std::map<Qidx, Qidx>;

SwapSequence token_swapping_approx(const CouplingGraph& graph, const TokenMap& map);

// Optimal-length sequence by BFS over token configurations; |V| <= 8.
SwapSequence token_swapping_exact(const CouplingGraph& graph, const TokenMap& map);

// Replay helper: final position of every vertex's token after applying the
// sequence. Throws Error(InvalidMap) if a pair is not an edge of the graph.
std::map<Qidx, Qidx> token_positions_after(const CouplingGraph& graph,
                                           const SwapSequence& swaps);

// BFS path from -> to inclusive, deterministic via name-ordered expansion.
std::vector<Qidx> shortest_path(const CouplingGraph& graph, const Qidx& from, const Qidx& to);

// BFS distance; returns -1 if unreachable.
int bfs_distance(const CouplingGraph& graph, const Qidx& from, const Qidx& to);

}  // namespace qalloc
