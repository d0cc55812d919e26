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

#include "qalloc/density.hpp"
#include "qalloc/parser.hpp"
#include "qalloc/sim.hpp"

namespace {

using namespace qalloc;

DensityState scrambled(std::size_t wires) {
  std::vector<VarName> labels;
  for (std::size_t i = 0; i < wires; ++i) labels.push_back("w" + std::to_string(i));
  DensityState s = DensityState::zeros(labels);
  for (std::size_t i = 0; i < wires; ++i) apply_h(s, labels[i]);
  for (std::size_t i = 0; i + 1 < wires; ++i) apply_cnot(s, labels[i], labels[i + 1]);
  return s;
}

void bm_apply_cnot(benchmark::State& state) {
  DensityState s = scrambled(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    apply_cnot(s, s.labels[0], s.labels[1]);
    benchmark::DoNotOptimize(s.rho);
  }
}
BENCHMARK(bm_apply_cnot)->Arg(4)->Arg(8)->Arg(10);

void bm_apply_reset(benchmark::State& state) {
  DensityState s = scrambled(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    apply_reset(s, s.labels[0]);
    benchmark::DoNotOptimize(s.rho);
  }
}
BENCHMARK(bm_apply_reset)->Arg(4)->Arg(8);

void bm_density_isomorphic(benchmark::State& state) {
  DensityState a = scrambled(static_cast<std::size_t>(state.range(0)));
  DensityState b = a;
  for (auto _ : state) {
    benchmark::DoNotOptimize(density_isomorphic(a, b));
  }
}
BENCHMARK(bm_density_isomorphic)->Arg(4)->Arg(6);

void bm_run_source_branching(benchmark::State& state) {
  SourceProgram p = parse_source(
      "main { let a = init() in let b = init() in let c = init() in"
      " let (x, y) = cnot(a, b) in"
      " if x then { let (p, q) = cnot(y, c) in (x, p, q) } else {"
      " if y then { (x, y, c) } else { (c, y, x) } } }");
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_source(p, 3, 10000));
  }
}
BENCHMARK(bm_run_source_branching);

}  // namespace

BENCHMARK_MAIN();
