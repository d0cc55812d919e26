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
#include <string>
#include <utility>
#include <vector>

#include "qalloc/ast.hpp"

namespace qalloc {

// Undirected labeled graph of physical qubits. Nodes are kept sorted and
// edges canonicalized (smaller endpoint first, deduplicated), so structural
// equality is insensitive to input order and edge direction.
class CouplingGraph {
 public:
  CouplingGraph() = default;

  // Throws Error(WellFormednessViolation) on self-loops or edges naming
  // unknown nodes. Connectivity is *not* enforced here; callers that require
  // it (the parser, the allocator) check `is_connected`.
  CouplingGraph(std::vector<Qidx> nodes, std::vector<std::pair<Qidx, Qidx>> edges);

  const std::vector<Qidx>& nodes() const { return nodes_; }
  const std::set<std::pair<Qidx, Qidx>>& edges() const { return edges_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_node(const Qidx& v) const;
  bool has_edge(const Qidx& a, const Qidx& b) const;
  const std::vector<Qidx>& neighbors(const Qidx& v) const;
  std::size_t degree(const Qidx& v) const { return neighbors(v).size(); }

  bool is_connected() const;

  // Subgraph induced by `keep`; unknown names are ignored.
  CouplingGraph induced(const std::set<Qidx>& keep) const;

  ConstraintSet to_constraints() const;

  friend bool operator==(const CouplingGraph& a, const CouplingGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Qidx> nodes_;
  std::set<std::pair<Qidx, Qidx>> edges_;
  std::map<Qidx, std::vector<Qidx>> adjacency_;
};

}  // namespace qalloc
