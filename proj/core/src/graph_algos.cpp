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

#include "qalloc/graph_algos.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>

namespace qalloc {

namespace {

void require_connected(const CouplingGraph& g) {
  if (!g.is_connected()) {
    throw Error(ErrorKind::DisconnectedInput, "graph is not connected");
  }
}

}  // namespace

std::set<Qidx> articulation_points(const CouplingGraph& graph) {
  require_connected(graph);
  std::set<Qidx> points;
  if (graph.node_count() <= 2) return points;
  std::map<Qidx, int> disc, low;
  int tick = 0;
  // Neighbor lists are sorted, so discovery order is deterministic.
  std::function<void(const Qidx&, const Qidx&)> dfs = [&](const Qidx& v, const Qidx& parent) {
    disc[v] = low[v] = ++tick;
    int children = 0;
    for (const auto& u : graph.neighbors(v)) {
      if (u == parent) continue;
      auto seen = disc.find(u);
      if (seen != disc.end()) {
        low[v] = std::min(low[v], seen->second);
        continue;
      }
      ++children;
      dfs(u, v);
      low[v] = std::min(low[v], low[u]);
      if (!parent.empty() && low[u] >= disc[v]) points.insert(v);
    }
    if (parent.empty() && children >= 2) points.insert(v);
  };
  dfs(graph.nodes().front(), "");
  return points;
}

std::set<Qidx> articulation_points_naive(const CouplingGraph& graph) {
  require_connected(graph);
  std::set<Qidx> points;
  if (graph.node_count() <= 2) return points;
  for (const auto& v : graph.nodes()) {
    std::set<Qidx> keep(graph.nodes().begin(), graph.nodes().end());
    keep.erase(v);
    if (!graph.induced(keep).is_connected()) points.insert(v);
  }
  return points;
}

namespace {

// Non-articulation vertex of minimum degree, ties broken by name. A
// connected graph with >= 2 vertices always has one (any leaf of a DFS
// tree); a single vertex is trivially removable.
Qidx pick_removable(const CouplingGraph& g) {
  if (g.node_count() == 1) return g.nodes().front();
  std::set<Qidx> art = articulation_points(g);
  Qidx best;
  std::size_t best_deg = std::numeric_limits<std::size_t>::max();
  for (const auto& v : g.nodes()) {
    if (art.count(v)) continue;
    std::size_t d = g.degree(v);
    if (d < best_deg) {
      best = v;
      best_deg = d;
    }
  }
  return best;
}

}  // namespace

SubgraphChain construct_subgraphs(const CouplingGraph& graph) {
  require_connected(graph);
  SubgraphChain chain;
  chain.graphs.resize(graph.node_count());
  CouplingGraph cur = graph;
  for (std::size_t size = graph.node_count(); size >= 1; --size) {
    chain.graphs[size - 1] = cur;
    Qidx u = pick_removable(cur);
    chain.removal_order.push_back(u);
    std::set<Qidx> keep(cur.nodes().begin(), cur.nodes().end());
    keep.erase(u);
    cur = cur.induced(keep);
  }
  return chain;
}

SubgraphAssignment assign_subgraphs(const SrcFunEnv& theta, const SubgraphChain& chain) {
  SubgraphAssignment out;
  for (const auto& [name, sig] : theta) {
    std::size_t k = sig.params.size() + static_cast<std::size_t>(sig.budget);
    if (k > chain.size()) {
      std::ostringstream msg;
      msg << "function '" << name << "' needs " << k << " qubits but the device has "
          << chain.size();
      throw Error(ErrorKind::DeviceTooSmall, msg.str());
    }
    if (k == 0) {
      out.clamped.push_back(name);
      out.workspace.emplace(name, chain.at_size(1));
    } else {
      out.workspace.emplace(name, chain.at_size(k));
    }
  }
  return out;
}

namespace {

bool embeds_identically(const CouplingGraph& host, const CouplingGraph& pattern) {
  for (const auto& n : pattern.nodes()) {
    if (!host.has_node(n)) return false;
  }
  for (const auto& [a, b] : pattern.edges()) {
    if (!host.has_edge(a, b)) return false;
  }
  return true;
}

bool backtrack_embed(const CouplingGraph& host, const CouplingGraph& pattern,
                     const std::vector<Qidx>& order, std::size_t depth, Embedding& partial,
                     std::set<Qidx>& used) {
  if (depth == order.size()) return true;
  const Qidx& pv = order[depth];
  for (const auto& hv : host.nodes()) {
    if (used.count(hv)) continue;
    bool ok = true;
    for (const auto& pn : pattern.neighbors(pv)) {
      auto it = partial.find(pn);
      if (it != partial.end() && !host.has_edge(hv, it->second)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    partial[pv] = hv;
    used.insert(hv);
    if (backtrack_embed(host, pattern, order, depth + 1, partial, used)) return true;
    partial.erase(pv);
    used.erase(hv);
  }
  return false;
}

}  // namespace

Embedding subgraph_isomorphism(const CouplingGraph& host, const CouplingGraph& pattern) {
  Embedding out;
  if (embeds_identically(host, pattern)) {
    for (const auto& n : pattern.nodes()) out[n] = n;
    return out;
  }
  if (pattern.node_count() > host.node_count() ||
      pattern.edge_count() > host.edge_count()) {
    throw Error(ErrorKind::NoEmbedding, "pattern does not fit into the host graph");
  }
  std::vector<Qidx> order = pattern.nodes();  // sorted: deterministic first-by-name result
  std::set<Qidx> used;
  if (!backtrack_embed(host, pattern, order, 0, out, used)) {
    throw Error(ErrorKind::NoEmbedding, "no embedding of the pattern into the host graph");
  }
  return out;
}

std::vector<Qidx> shortest_path(const CouplingGraph& graph, const Qidx& from, const Qidx& to) {
  if (!graph.has_node(from) || !graph.has_node(to)) {
    throw Error(ErrorKind::InvalidMap, "shortest_path endpoint is not a node");
  }
  if (from == to) return {from};
  std::map<Qidx, Qidx> parent;
  std::deque<Qidx> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    Qidx v = queue.front();
    queue.pop_front();
    for (const auto& u : graph.neighbors(v)) {
      if (parent.count(u)) continue;
      parent[u] = v;
      if (u == to) {
        std::vector<Qidx> path{to};
        Qidx cur = to;
        while (cur != from) {
          cur = parent[cur];
          path.push_back(cur);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(u);
    }
  }
  throw Error(ErrorKind::DisconnectedInput,
              "no path between " + from + " and " + to);
}

int bfs_distance(const CouplingGraph& graph, const Qidx& from, const Qidx& to) {
  if (from == to) return 0;
  std::map<Qidx, int> dist{{from, 0}};
  std::deque<Qidx> queue{from};
  while (!queue.empty()) {
    Qidx v = queue.front();
    queue.pop_front();
    for (const auto& u : graph.neighbors(v)) {
      if (dist.count(u)) continue;
      dist[u] = dist[v] + 1;
      if (u == to) return dist[u];
      queue.push_back(u);
    }
  }
  return -1;
}

namespace {

void validate_token_map(const CouplingGraph& graph, const TokenMap& map) {
  std::set<Qidx> images;
  for (const auto& [v, w] : map) {
    if (!graph.has_node(v) || !graph.has_node(w)) {
      throw Error(ErrorKind::InvalidMap, "token map mentions unknown vertex");
    }
    if (!images.insert(w).second) {
      throw Error(ErrorKind::InvalidMap, "token map is not injective at " + w);
    }
  }
}

// Extends the partial injection to a total permutation. Unconstrained
// tokens prefer to stay put; the rest greedily take the nearest free target.
std::map<Qidx, Qidx> complete_permutation(const CouplingGraph& graph, const TokenMap& map) {
  std::map<Qidx, Qidx> pi = map;
  std::set<Qidx> taken;
  for (const auto& [v, w] : map) taken.insert(w);
  std::vector<Qidx> free_sources, free_targets;
  for (const auto& v : graph.nodes()) {
    if (!pi.count(v)) free_sources.push_back(v);
    if (!taken.count(v)) free_targets.push_back(v);
  }
  std::set<Qidx> targets_left(free_targets.begin(), free_targets.end());
  std::vector<Qidx> pending;
  for (const auto& v : free_sources) {
    if (targets_left.count(v)) {
      pi[v] = v;
      targets_left.erase(v);
    } else {
      pending.push_back(v);
    }
  }
  for (const auto& v : pending) {
    Qidx best;
    int best_dist = std::numeric_limits<int>::max();
    for (const auto& w : targets_left) {
      int d = bfs_distance(graph, v, w);
      if (d >= 0 && d < best_dist) {
        best = w;
        best_dist = d;
      }
    }
    pi[v] = best;
    targets_left.erase(best);
  }
  return pi;
}

bool map_satisfied(const TokenMap& map, const std::map<Qidx, Qidx>& loc) {
  return std::all_of(map.begin(), map.end(),
                     [&](const auto& kv) { return loc.at(kv.first) == kv.second; });
}

}  // namespace

SwapSequence token_swapping_approx(const CouplingGraph& graph, const TokenMap& map) {
  validate_token_map(graph, map);
  std::map<Qidx, Qidx> pi = complete_permutation(graph, map);

  // Token state: loc[origin] = current vertex, at[vertex] = origin there.
  std::map<Qidx, Qidx> loc, at;
  for (const auto& v : graph.nodes()) {
    loc[v] = v;
    at[v] = v;
  }
  SwapSequence swaps;
  auto do_swap = [&](const Qidx& a, const Qidx& b) {
    Qidx ta = at[a], tb = at[b];
    std::swap(at[a], at[b]);
    loc[ta] = b;
    loc[tb] = a;
    swaps.emplace_back(a, b);
  };

  // Settle one vertex of the residual graph per round: pick a removable
  // vertex u (same rule as the subgraph chain), walk the token destined for
  // u along a shortest path in the residual graph, then freeze u. Walking
  // only inside the residual graph keeps settled tokens settled, so the
  // loop terminates. Each step prefers a "happy" neighbor whose displaced
  // token also gets closer to its own target.
  CouplingGraph cur = graph;
  while (cur.node_count() > 0 && !map_satisfied(map, loc)) {
    Qidx u = pick_removable(cur);
    Qidx token;
    for (const auto& [origin, target] : pi) {
      if (target == u) {
        token = origin;
        break;
      }
    }
    while (loc[token] != u) {
      const Qidx a = loc[token];
      int d = bfs_distance(cur, a, u);
      Qidx step;
      bool step_happy = false;
      for (const auto& nb : cur.neighbors(a)) {
        if (bfs_distance(cur, nb, u) != d - 1) continue;
        const Qidx& displaced_target = pi.at(at.at(nb));
        bool happy = bfs_distance(cur, a, displaced_target) <
                     bfs_distance(cur, nb, displaced_target);
        if (step.empty() || (happy && !step_happy)) {
          step = nb;
          step_happy = happy;
        }
        if (step_happy) break;  // neighbors are name-sorted: first happy wins
      }
      do_swap(a, step);
    }
    std::set<Qidx> keep(cur.nodes().begin(), cur.nodes().end());
    keep.erase(u);
    cur = cur.induced(keep);
  }
  return swaps;
}

SwapSequence token_swapping_exact(const CouplingGraph& graph, const TokenMap& map) {
  if (graph.node_count() > 8) {
    throw Error(ErrorKind::TooLarge, "exact token swapping is limited to 8 vertices");
  }
  validate_token_map(graph, map);

  std::vector<Qidx> nodes = graph.nodes();
  auto index_of = [&](const Qidx& v) {
    return static_cast<std::uint64_t>(
        std::find(nodes.begin(), nodes.end(), v) - nodes.begin());
  };
  std::vector<Qidx> origins;
  for (const auto& [v, w] : map) origins.push_back(v);

  auto encode = [&](const std::vector<std::uint64_t>& pos) {
    std::uint64_t key = 0;
    for (auto p : pos) key = key * nodes.size() + p;
    return key;
  };
  std::vector<std::uint64_t> start, goal;
  for (const auto& o : origins) {
    start.push_back(index_of(o));
    goal.push_back(index_of(map.at(o)));
  }
  std::uint64_t goal_key = encode(goal);
  std::vector<std::pair<std::size_t, std::size_t>> edge_ix;
  for (const auto& [a, b] : graph.edges()) {
    edge_ix.emplace_back(index_of(a), index_of(b));
  }

  struct Visit {
    std::uint64_t parent;
    std::size_t edge;
  };
  std::map<std::uint64_t, Visit> visited;
  std::deque<std::vector<std::uint64_t>> queue;
  visited[encode(start)] = {encode(start), SIZE_MAX};
  queue.push_back(start);
  while (!queue.empty()) {
    std::vector<std::uint64_t> pos = queue.front();
    queue.pop_front();
    std::uint64_t key = encode(pos);
    if (key == goal_key) {
      SwapSequence out;
      std::uint64_t cur = key;
      while (true) {
        const Visit& v = visited.at(cur);
        if (v.edge == SIZE_MAX) break;
        out.emplace_back(nodes[edge_ix[v.edge].first], nodes[edge_ix[v.edge].second]);
        cur = v.parent;
      }
      std::reverse(out.begin(), out.end());
      return out;
    }
    for (std::size_t e = 0; e < edge_ix.size(); ++e) {
      auto [a, b] = edge_ix[e];
      std::vector<std::uint64_t> next = pos;
      bool touched = false;
      for (auto& p : next) {
        if (p == a) {
          p = b;
          touched = true;
        } else if (p == b) {
          p = a;
          touched = true;
        }
      }
      if (!touched) continue;  // swapping two untracked tokens never helps
      std::uint64_t nk = encode(next);
      if (visited.count(nk)) continue;
      visited[nk] = {key, e};
      queue.push_back(next);
    }
  }
  throw Error(ErrorKind::InvalidMap, "token configuration is unreachable");
}

std::map<Qidx, Qidx> token_positions_after(const CouplingGraph& graph,
                                           const SwapSequence& swaps) {
  std::map<Qidx, Qidx> loc, at;
  for (const auto& v : graph.nodes()) {
    loc[v] = v;
    at[v] = v;
  }
  for (const auto& [a, b] : swaps) {
    if (!graph.has_edge(a, b)) {
      throw Error(ErrorKind::InvalidMap, "swap " + a + "-" + b + " is not an edge");
    }
    Qidx ta = at[a], tb = at[b];
    std::swap(at[a], at[b]);
    loc[ta] = b;
    loc[tb] = a;
  }
  return loc;
}

}  // namespace qalloc
