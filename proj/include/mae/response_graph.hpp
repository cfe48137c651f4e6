// Copyright 2026 The MAE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MAE_RESPONSE_GRAPH_HPP_
#define MAE_RESPONSE_GRAPH_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "mae/errors.hpp"
#include "mae/game.hpp"

namespace mae {

enum class EdgeFlag { kCertain, kUncertain, kTie };

// A single-deviation comparison oriented toward the deviating player's
// better payoff. Tie edges carry from < to and are read in both directions.
struct ResponseEdge {
  std::size_t from;
  std::size_t to;
  int player;
  EdgeFlag flag = EdgeFlag::kCertain;

  std::pair<std::size_t, std::size_t> key() const {
    return {std::min(from, to), std::max(from, to)};
  }
};

// Directed graph over profiles (or strategies, single-population) holding
// exactly one edge per comparable pair.
class ResponseGraph {
 public:
  ResponseGraph() = default;
  explicit ResponseGraph(std::size_t num_nodes) : num_nodes_(num_nodes) {}

  std::size_t num_nodes() const { return num_nodes_; }
  const std::vector<ResponseEdge>& edges() const { return edges_; }
  std::vector<ResponseEdge>& mutable_edges() { return edges_; }

  void AddEdge(ResponseEdge edge) {
    if (edge.from >= num_nodes_ || edge.to >= num_nodes_ || edge.from == edge.to) {
      throw ContractViolation("response edge endpoints out of range");
    }
    if (edge.flag == EdgeFlag::kTie && edge.from > edge.to) std::swap(edge.from, edge.to);
    edges_.push_back(edge);
  }

  // Adjacency lists; tie edges appear in both directions.
  std::vector<std::vector<std::size_t>> Successors() const {
    std::vector<std::vector<std::size_t>> out(num_nodes_);
    for (const auto& e : edges_) {
      out[e.from].push_back(e.to);
      if (e.flag == EdgeFlag::kTie) out[e.to].push_back(e.from);
    }
    return out;
  }

  // Edge lookup keyed by the unordered endpoint pair.
  std::map<std::pair<std::size_t, std::size_t>, ResponseEdge> ByPair() const {
    std::map<std::pair<std::size_t, std::size_t>, ResponseEdge> out;
    for (const auto& e : edges_) out.emplace(e.key(), e);
    return out;
  }

  std::size_t CountFlag(EdgeFlag flag) const {
    return std::count_if(edges_.begin(), edges_.end(),
                         [flag](const ResponseEdge& e) { return e.flag == flag; });
  }

 private:
  std::size_t num_nodes_ = 0;
  std::vector<ResponseEdge> edges_;
};

// Calls fn(a, b, player) once per unordered single-deviation pair with a < b.
template <typename Fn>
void ForEachDeviationPair(const GameShape& shape, Fn&& fn) {
  for (std::size_t a = 0; a < shape.num_profiles(); ++a) {
    for (int k = 0; k < shape.num_players(); ++k) {
      const int own = shape.StrategyOf(a, k);
      for (int t = own + 1; t < shape.num_strategies(k); ++t) {
        fn(a, shape.WithStrategy(a, k, t), k);
      }
    }
  }
}

inline ResponseEdge OrientByPayoff(std::size_t a, std::size_t b, int player,
                                   double payoff_a, double payoff_b) {
  if (payoff_a == payoff_b) return {a, b, player, EdgeFlag::kTie};
  return payoff_b > payoff_a ? ResponseEdge{a, b, player, EdgeFlag::kCertain}
                             : ResponseEdge{b, a, player, EdgeFlag::kCertain};
}

// Better-response graph: every single-deviation edge points toward the
// profile that pays the deviating player strictly more.
inline ResponseGraph BuildResponseGraph(const PayoffTensor& game) {
  const GameShape& shape = game.shape();
  ResponseGraph graph(shape.num_profiles());
  ForEachDeviationPair(shape, [&](std::size_t a, std::size_t b, int k) {
    graph.AddEdge(OrientByPayoff(a, b, k, game(k, a), game(k, b)));
  });
  return graph;
}

// Single-population graph over player 1's strategies of a symmetric
// two-player game: i -> j iff the mutant j earns more against i than i
// earns against j, M^1(j, i) > M^1(i, j).
inline ResponseGraph BuildSinglePopulationResponseGraph(const PayoffTensor& game) {
  const GameShape& shape = game.shape();
  MAE_REQUIRE(shape.num_players() == 2 && shape.num_strategies(0) == shape.num_strategies(1),
              "single-population mode needs a square two-player game");
  const int n = shape.num_strategies(0);
  ResponseGraph graph(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double resident = game(0, shape.Index({i, j}));
      const double mutant = game(0, shape.Index({j, i}));
      graph.AddEdge(OrientByPayoff(i, j, 0, resident, mutant));
    }
  }
  return graph;
}

// Strongly connected components (Tarjan, iterative). Components come out in
// reverse topological order of the condensation.
inline std::vector<std::vector<std::size_t>> StronglyConnectedComponents(
    const std::vector<std::vector<std::size_t>>& successors) {
  const std::size_t n = successors.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t next_index = 0;

  // (node, position in its successor list)
  std::vector<std::pair<std::size_t, std::size_t>> call_stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call_stack.emplace_back(root, 0);
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call_stack.empty()) {
      auto& [v, pos] = call_stack.back();
      if (pos < successors[v].size()) {
        const std::size_t w = successors[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_stack.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const std::size_t parent = call_stack.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
      }
      if (lowlink[done] == index[done]) {
        std::vector<std::size_t> component;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != done);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
    }
  }
  return components;
}

// Sink strongly connected components (Markov-Conley chains). Tie edges
// merge their endpoints. Result is sorted by smallest member.
inline std::vector<std::vector<std::size_t>> FindSinkComponents(
    const std::vector<std::vector<std::size_t>>& successors) {
  auto components = StronglyConnectedComponents(successors);
  std::vector<std::size_t> component_of(successors.size());
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (std::size_t v : components[c]) component_of[v] = c;
  }
  std::vector<std::vector<std::size_t>> sinks;
  for (std::size_t c = 0; c < components.size(); ++c) {
    bool leaves = false;
    for (std::size_t v : components[c]) {
      for (std::size_t w : successors[v]) {
        if (component_of[w] != c) {
          leaves = true;
          break;
        }
      }
      if (leaves) break;
    }
    if (!leaves) sinks.push_back(components[c]);
  }
  std::sort(sinks.begin(), sinks.end());
  return sinks;
}

inline std::vector<std::vector<std::size_t>> FindMccs(const ResponseGraph& graph) {
  return FindSinkComponents(graph.Successors());
}

}  // namespace mae

#endif  // MAE_RESPONSE_GRAPH_HPP_
