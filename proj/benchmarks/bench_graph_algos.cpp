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

#include "qalloc/fuzz.hpp"
#include "qalloc/graph_algos.hpp"

namespace {

using namespace qalloc;

CouplingGraph benchmark_graph(std::size_t nodes) {
  Rng rng(97);
  return random_connected_graph(rng, nodes, 0.15);
}

void bm_articulation_points(benchmark::State& state) {
  CouplingGraph g = benchmark_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(articulation_points(g));
  }
}
BENCHMARK(bm_articulation_points)->Arg(16)->Arg(32)->Arg(64);

void bm_construct_subgraphs(benchmark::State& state) {
  CouplingGraph g = benchmark_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(construct_subgraphs(g));
  }
}
BENCHMARK(bm_construct_subgraphs)->Arg(8)->Arg(16)->Arg(32);

void bm_token_swapping_approx(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  CouplingGraph g = benchmark_graph(n);
  Rng rng(98);
  std::vector<Qidx> targets = g.nodes();
  for (std::size_t j = targets.size(); j > 1; --j) {
    std::swap(targets[j - 1], targets[rng() % j]);
  }
  TokenMap p;
  for (std::size_t j = 0; j < n; ++j) p[g.nodes()[j]] = targets[j];
  for (auto _ : state) {
    benchmark::DoNotOptimize(token_swapping_approx(g, p));
  }
}
BENCHMARK(bm_token_swapping_approx)->Arg(8)->Arg(16)->Arg(32);

void bm_shortest_path(benchmark::State& state) {
  CouplingGraph g = benchmark_graph(64);
  const Qidx& from = g.nodes().front();
  const Qidx& to = g.nodes().back();
  for (auto _ : state) {
    benchmark::DoNotOptimize(shortest_path(g, from, to));
  }
}
BENCHMARK(bm_shortest_path);

}  // namespace
