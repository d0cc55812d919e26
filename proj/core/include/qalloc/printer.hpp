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

// Canonical, deterministic concrete syntax. parse(print(p)) == p for every
// well-formed AST (round-trip law); the output is bit-stable for golden
// tests.
std::string print_source(const SourceProgram& program);
std::string print_target(const TargetProgram& program);

std::string print_source_expr(const SourceExprPtr& expr);
std::string print_target_expr(const TargetExprPtr& expr);

std::string print_coupling_graph(const CouplingGraph& graph);

// Graphviz rendering, for --emit-dot.
std::string to_dot(const CouplingGraph& graph, const std::string& name = "coupling");

}  // namespace qalloc
