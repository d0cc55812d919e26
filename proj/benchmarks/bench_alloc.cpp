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

#include <benchmark/benchmark.h>

#include "qalloc/alloc.hpp"
#include "qalloc/check_source.hpp"
#include "qalloc/fuzz.hpp"

namespace {

using namespace qalloc;

std::vector<GeneratedCase> benchmark_cases(int count, int depth) {
  FuzzConfig cfg;
  cfg.seed = 99;
  cfg.max_depth = depth;
  cfg.allow_recursion = false;
  Rng rng(cfg.seed);
  std::vector<GeneratedCase> cases;
  for (int i = 0; i < count; ++i) cases.push_back(generate_case(rng, cfg));
  return cases;
}

void bm_check_program(benchmark::State& state) {
  auto cases = benchmark_cases(16, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    for (const auto& c : cases) {
      benchmark::DoNotOptimize(
          check_program(c.program, static_cast<int>(c.graph.node_count())));
    }
  }
}
BENCHMARK(bm_check_program)->Arg(6)->Arg(10);

void bm_qubit_alloc(benchmark::State& state) {
  auto cases = benchmark_cases(16, static_cast<int>(state.range(0)));
  std::vector<CheckedProgram> checked;
  for (const auto& c : cases) {
    checked.push_back(check_program(c.program, static_cast<int>(c.graph.node_count())));
  }
  for (auto _ : state) {
    for (std::size_t i = 0; i < cases.size(); ++i) {
      benchmark::DoNotOptimize(qubit_alloc(checked[i], cases[i].graph));
    }
  }
}
BENCHMARK(bm_qubit_alloc)->Arg(6)->Arg(10);

}  // namespace
