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

#include <string>

#include "qalloc/ast.hpp"
#include "qalloc/errors.hpp"
#include "qalloc/graph.hpp"
#include "qalloc/parser.hpp"

namespace qalloc::test {

inline CouplingGraph qx2() {
  return parse_coupling_graph(
      "nodes: q0 q1 q2 q3 q4\n"
      "edges: q0-q1 q0-q2 q1-q2 q2-q3 q2-q4 q3-q4\n");
}

inline CouplingGraph fig5_graph() {
  return parse_coupling_graph(
      "nodes: q1 q2 q3 q4\n"
      "edges: q1-q2 q1-q3 q2-q3 q4-q3\n");
}

inline CouplingGraph path3() {
  return parse_coupling_graph("nodes: q0 q1 q2\nedges: q0-q1 q1-q2\n");
}

inline CouplingGraph path(const std::vector<Qidx>& nodes) {
  std::vector<std::pair<Qidx, Qidx>> edges;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) edges.emplace_back(nodes[i], nodes[i + 1]);
  return CouplingGraph(nodes, edges);
}

inline CouplingGraph triangle() {
  return CouplingGraph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
}

// Whether a callable throws an Error of the given kind.
template <typename F>
bool throws_kind(ErrorKind kind, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace qalloc::test
