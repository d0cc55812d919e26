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

#include "qalloc/graph.hpp"

#include <algorithm>
#include <deque>

namespace qalloc {

CouplingGraph::CouplingGraph(std::vector<Qidx> nodes,
                             std::vector<std::pair<Qidx, Qidx>> edges) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  nodes_ = std::move(nodes);
  for (const auto& n : nodes_) adjacency_[n];
  for (auto& [a, b] : edges) {
    if (a == b) {
      throw Error(ErrorKind::WellFormednessViolation, "self-loop on node " + a);
    }
    if (!adjacency_.count(a) || !adjacency_.count(b)) {
      throw Error(ErrorKind::WellFormednessViolation,
                  "edge " + a + "-" + b + " references an unknown node");
    }
    edges_.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  }
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& [n, adj] : adjacency_) std::sort(adj.begin(), adj.end());
}

bool CouplingGraph::has_node(const Qidx& v) const { return adjacency_.count(v) > 0; }

bool CouplingGraph::has_edge(const Qidx& a, const Qidx& b) const {
  if (a == b) return false;
  return edges_.count(a < b ? std::make_pair(a, b) : std::make_pair(b, a)) > 0;
}

const std::vector<Qidx>& CouplingGraph::neighbors(const Qidx& v) const {
  static const std::vector<Qidx> kEmpty;
  auto it = adjacency_.find(v);
  return it == adjacency_.end() ? kEmpty : it->second;
}

bool CouplingGraph::is_connected() const {
  if (nodes_.empty()) return true;
  std::set<Qidx> seen{nodes_.front()};
  std::deque<Qidx> queue{nodes_.front()};
  while (!queue.empty()) {
    Qidx v = queue.front();
    queue.pop_front();
    for (const auto& u : neighbors(v)) {
      if (seen.insert(u).second) queue.push_back(u);
    }
  }
  return seen.size() == nodes_.size();
}

CouplingGraph CouplingGraph::induced(const std::set<Qidx>& keep) const {
  std::vector<Qidx> nodes;
  for (const auto& n : nodes_) {
    if (keep.count(n)) nodes.push_back(n);
  }
  std::vector<std::pair<Qidx, Qidx>> edges;
  for (const auto& [a, b] : edges_) {
    if (keep.count(a) && keep.count(b)) edges.emplace_back(a, b);
  }
  return CouplingGraph(std::move(nodes), std::move(edges));
}

ConstraintSet CouplingGraph::to_constraints() const {
  ConstraintSet phi;
  for (const auto& [a, b] : edges_) phi.add(a, b);
  return phi;
}

}  // namespace qalloc
