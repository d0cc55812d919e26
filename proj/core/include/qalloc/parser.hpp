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
#include "qalloc/graph.hpp"

namespace qalloc {

struct ParseOptions {
  // Accept the single-qubit `h` gate in both languages. Off by default; the
  // core grammar has CNOT (and swap in the target) as the only gates.
  bool enable_hadamard = false;
};

// Throws ParseError on any deviation from the grammar. Comments run from
// `//` to end of line. Duplicate function names are rejected here.
SourceProgram parse_source(const std::string& text, const ParseOptions& opts = {});

// Target programs carry qidx-annotated function headers and a `qubits:`
// preamble in the main block. Reserved `%`-prefixed names are accepted here
// (allocator output contains them) but rejected in source programs.
TargetProgram parse_target(const std::string& text, const ParseOptions& opts = {});

// Format:
//   # comment
//   nodes: q0 q1 q2
//   edges: q0-q1 q1-q2
// Edge direction and duplicates are ignored; the graph must be connected.
CouplingGraph parse_coupling_graph(const std::string& text);

}  // namespace qalloc
