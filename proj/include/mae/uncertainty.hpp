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

// Ranking-weight intervals under payoff uncertainty, infinite alpha.
//
// Element-wise bounds L <= M <= U split the response graph into certain and
// uncertain edges. For a target state s, the ranking weight under any
// consistent orientation equals 1 / (mean return time to s) of the
// unperturbed chain, so extremal weights come from extremal return times.
// Letting every state orient its own uncertain edges independently turns the
// constrained problem into a plain stochastic shortest path, solved here by
// policy iteration. Whether the weight can reach zero is decided directly on
// the graph through forced ancestors and descendants.

#ifndef MAE_UNCERTAINTY_HPP_
#define MAE_UNCERTAINTY_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mae/alpharank.hpp"
#include "mae/confidence.hpp"
#include "mae/errors.hpp"
#include "mae/game.hpp"
#include "mae/game_io.hpp"
#include "mae/response_graph.hpp"

namespace mae {

struct PayoffBounds {
  PayoffTensor lower;
  PayoffTensor upper;

  const GameShape& shape() const { return lower.shape(); }

  void Validate() const {
    MAE_REQUIRE(lower.shape() == upper.shape(), "bounds have different shapes");
    const GameShape& sh = lower.shape();
    for (int k = 0; k < sh.num_players(); ++k) {
      for (std::size_t s = 0; s < sh.num_profiles(); ++s) {
        MAE_REQUIRE(lower(k, s) <= upper(k, s),
                    "lower bound exceeds upper bound at profile " + std::to_string(s));
      }
    }
  }

  bool Contains(const PayoffTensor& game) const {
    const GameShape& sh = shape();
    for (int k = 0; k < sh.num_players(); ++k) {
      for (std::size_t s = 0; s < sh.num_profiles(); ++s) {
        if (game(k, s) < lower(k, s) || game(k, s) > upper(k, s)) return false;
      }
    }
    return true;
  }
};

// Zero-width bounds at the game itself.
inline PayoffBounds ExactBounds(const PayoffTensor& game) { return {game, game}; }

// game +/- half_width, clipped to `range`.
inline PayoffBounds WidenedBounds(const PayoffTensor& game, double half_width,
                                  OutcomeRange range = {}) {
  MAE_REQUIRE(half_width >= 0.0, "half width must be nonnegative");
  std::vector<std::vector<double>> lo = game.payoffs(), hi = game.payoffs();
  for (auto& row : lo) {
    for (double& v : row) v = std::clamp(v - half_width, range.lo, range.hi);
  }
  for (auto& row : hi) {
    for (double& v : row) v = std::clamp(v + half_width, range.lo, range.hi);
  }
  return {PayoffTensor(game.shape(), lo, game.m_max()),
          PayoffTensor(game.shape(), hi, game.m_max())};
}

// Simultaneous intervals from sampled means: a union bound over all |S| K
// entries gives each entry failure probability delta / (|S| K). Unsampled
// entries span the whole outcome range.
inline PayoffBounds EmpiricalBounds(const EmpiricalPayoffs& empirical, double delta,
                                    ConfidenceMethod method, OutcomeRange range = {}) {
  MAE_REQUIRE(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  const GameShape& sh = empirical.shape();
  const double f = delta / (static_cast<double>(sh.num_profiles()) * sh.num_players());
  std::vector<std::vector<double>> lo(sh.num_players(),
                                      std::vector<double>(sh.num_profiles(), range.lo));
  std::vector<std::vector<double>> hi(sh.num_players(),
                                      std::vector<double>(sh.num_profiles(), range.hi));
  for (std::size_t s = 0; s < sh.num_profiles(); ++s) {
    if (!empirical.defined(s)) continue;
    for (int k = 0; k < sh.num_players(); ++k) {
      const ConfidenceInterval ci = ClipToRange(
          MakeInterval(method, empirical.mean(k, s), empirical.count(s), f, range), range);
      lo[k][s] = ci.lower;
      hi[k][s] = ci.upper;
    }
  }
  const double m_max = std::max(std::abs(range.lo), std::abs(range.hi));
  return {PayoffTensor(sh, lo, m_max), PayoffTensor(sh, hi, m_max)};
}

struct UncertainEdge {
  std::size_t a;
  std::size_t b;
  int player;
};

// Certain edges (directed, or ties read both ways) plus uncertain edges whose
// direction the bounds leave open. Every comparable pair sits in exactly one.
struct UncertainResponseGraph {
  std::size_t num_nodes = 0;
  std::vector<ResponseEdge> certain;
  std::vector<UncertainEdge> uncertain;
  double eta = 0.0;
  PopulationMode mode = PopulationMode::kMulti;
};

namespace internal {

// Pair (a, b): the deviator earns [la, ua] at a and [lb, ub] at b.
// Touching intervals count as certain; identical degenerate ones as a tie.
inline void ClassifyPair(UncertainResponseGraph& g, std::size_t a, std::size_t b, int player,
                         double la, double ua, double lb, double ub) {
  if (la == ua && lb == ub && la == lb) {
    g.certain.push_back({std::min(a, b), std::max(a, b), player, EdgeFlag::kTie});
  } else if (ua <= lb) {
    g.certain.push_back({a, b, player, EdgeFlag::kCertain});
  } else if (ub <= la) {
    g.certain.push_back({b, a, player, EdgeFlag::kCertain});
  } else {
    g.uncertain.push_back({a, b, player});
  }
}

}  // namespace internal

inline UncertainResponseGraph ClassifyEdges(const PayoffBounds& bounds,
                                            PopulationMode mode = PopulationMode::kMulti) {
  bounds.Validate();
  const GameShape& shape = bounds.shape();
  UncertainResponseGraph g;
  g.mode = mode;
  if (mode == PopulationMode::kMulti) {
    g.num_nodes = shape.num_profiles();
    g.eta = shape.eta();
    ForEachDeviationPair(shape, [&](std::size_t a, std::size_t b, int k) {
      internal::ClassifyPair(g, a, b, k, bounds.lower(k, a), bounds.upper(k, a),
                             bounds.lower(k, b), bounds.upper(k, b));
    });
    return g;
  }
  MAE_REQUIRE(shape.num_players() == 2 && shape.num_strategies(0) == shape.num_strategies(1),
              "single-population mode needs a square two-player game");
  const int n = shape.num_strategies(0);
  g.num_nodes = n;
  g.eta = n > 1 ? 1.0 / (n - 1) : 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // Resident i against mutant j: i -> j iff M1(j, i) > M1(i, j).
      const std::size_t ij = shape.Index({i, j});
      const std::size_t ji = shape.Index({j, i});
      internal::ClassifyPair(g, i, j, 0, bounds.lower(0, ij), bounds.upper(0, ij),
                             bounds.lower(0, ji), bounds.upper(0, ji));
    }
  }
  return g;
}

namespace internal {

// Nodes reachable from `start` along `adj`, start included.
inline std::vector<bool> Reachable(const std::vector<std::vector<std::size_t>>& adj,
                                   std::size_t start) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

inline std::vector<std::vector<std::size_t>> Reverse(
    const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<std::vector<std::size_t>> out(adj.size());
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (std::size_t w : adj[v]) out[w].push_back(v);
  }
  return out;
}

inline std::vector<std::vector<std::size_t>> CertainSuccessors(const UncertainResponseGraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.num_nodes);
  for (const auto& e : g.certain) {
    adj[e.from].push_back(e.to);
    if (e.flag == EdgeFlag::kTie) adj[e.to].push_back(e.from);
  }
  return adj;
}

}  // namespace internal

// Whether some orientation of the uncertain edges puts s outside every sink
// component, so its infimum ranking weight is zero.
//
// F_A: states with a certain path to s. F_D: states with a certain path from
// s. If F_D leaves F_A, pointing the uncertain edges around F_D \ F_A inward
// traps a sink there. Otherwise uncertain edges leaving F_A point out, and
// inside F_A uncertain edges between states that can already escape and
// those that cannot are pointed at the escaping side until nothing changes;
// s is excludable iff it can escape.
inline bool MccMembershipExcludable(std::size_t s, const UncertainResponseGraph& g) {
  MAE_REQUIRE(s < g.num_nodes, "state out of range");
  const auto certain = internal::CertainSuccessors(g);
  const std::vector<bool> desc = internal::Reachable(certain, s);
  const std::vector<bool> anc = internal::Reachable(internal::Reverse(certain), s);
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    if (desc[v] && !anc[v]) return true;
  }

  // Directed arcs decided so far: certain edges plus oriented uncertain ones.
  auto arcs = certain;
  std::vector<bool> oriented(g.uncertain.size(), false);
  for (std::size_t i = 0; i < g.uncertain.size(); ++i) {
    const auto& e = g.uncertain[i];
    if (anc[e.a] != anc[e.b]) {
      const std::size_t inside = anc[e.a] ? e.a : e.b;
      const std::size_t outside = anc[e.a] ? e.b : e.a;
      arcs[inside].push_back(outside);
      oriented[i] = true;
    }
  }
  std::vector<bool> escapes(g.num_nodes, false);
  for (;;) {
    // States of F_A with a decided path out of F_A.
    std::vector<std::vector<std::size_t>> rev(g.num_nodes);
    for (std::size_t v = 0; v < g.num_nodes; ++v) {
      for (std::size_t w : arcs[v]) rev[w].push_back(v);
    }
    std::fill(escapes.begin(), escapes.end(), false);
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < g.num_nodes; ++v) {
      if (!anc[v]) {
        escapes[v] = true;
        stack.push_back(v);
      }
    }
    while (!stack.empty()) {
      const std::size_t w = stack.back();
      stack.pop_back();
      for (std::size_t v : rev[w]) {
        if (!escapes[v]) {
          escapes[v] = true;
          stack.push_back(v);
        }
      }
    }
    bool changed = false;
    for (std::size_t i = 0; i < g.uncertain.size(); ++i) {
      if (oriented[i]) continue;
      const auto& e = g.uncertain[i];
      if (escapes[e.a] == escapes[e.b]) continue;
      const std::size_t stuck = escapes[e.a] ? e.b : e.a;
      const std::size_t free = escapes[e.a] ? e.a : e.b;
      arcs[stuck].push_back(free);
      oriented[i] = true;
      changed = true;
    }
    if (!changed) break;
  }
  return escapes[s];
}

enum class SspObjective { kMinimize, kMaximize };

struct SspResult {
  // Mean return time to s; infinite when s can be left for good.
  double lambda = std::numeric_limits<double>::infinity();
  int iterations = 0;
  // Per uncertain edge, whether each endpoint moves along it: [a -> b, b -> a].
  std::vector<std::array<bool, 2>> policy;
};

namespace internal {

struct Arc {
  std::size_t to;
  double rate;
};

// Per-state certain arcs and incident uncertain edges (neighbor, edge id).
struct SspLayout {
  std::vector<std::vector<Arc>> certain;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> uncertain;
};

inline SspLayout MakeLayout(const UncertainResponseGraph& g, int m) {
  SspLayout out;
  out.certain.resize(g.num_nodes);
  out.uncertain.resize(g.num_nodes);
  for (const auto& e : g.certain) {
    if (e.flag == EdgeFlag::kTie) {
      out.certain[e.from].push_back({e.to, g.eta / m});
      out.certain[e.to].push_back({e.from, g.eta / m});
    } else {
      out.certain[e.from].push_back({e.to, g.eta});
    }
  }
  for (std::size_t i = 0; i < g.uncertain.size(); ++i) {
    out.uncertain[g.uncertain[i].a].push_back({g.uncertain[i].b, i});
    out.uncertain[g.uncertain[i].b].push_back({g.uncertain[i].a, i});
  }
  return out;
}

// Side index of `from` on uncertain edge i: 0 if it is endpoint a.
inline int Side(const UncertainResponseGraph& g, std::size_t i, std::size_t from) {
  return g.uncertain[i].a == from ? 0 : 1;
}

// Hitting times of s from every state in `members` (s excluded) under
// `policy`: h = 1 + Q h with Q the chain restricted to members \ {s}.
// Returns empty when the restricted system is singular or not a proper
// policy (some member cannot reach s).
inline std::vector<double> EvaluatePolicy(std::size_t s, const UncertainResponseGraph& g,
                                          const SspLayout& layout,
                                          const std::vector<bool>& members,
                                          const std::vector<std::array<bool, 2>>& policy) {
  const std::size_t n = g.num_nodes;
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<std::ptrdiff_t> slot(n, -1);
  std::size_t count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (members[v] && v != s) slot[v] = static_cast<std::ptrdiff_t>(count++);
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(count, count);
  for (std::size_t v = 0; v < n; ++v) {
    if (slot[v] < 0) continue;
    double out_rate = 0.0;
    auto add = [&](std::size_t w, double rate) {
      out_rate += rate;
      adj[v].push_back(w);
      if (w == s) return;
      if (slot[w] < 0) throw ContractViolation("policy leaves the evaluated state set");
      a(slot[v], slot[w]) -= rate;
    };
    for (const Arc& arc : layout.certain[v]) add(arc.to, arc.rate);
    for (const auto& [w, i] : layout.uncertain[v]) {
      if (policy[i][Side(g, i, v)]) add(w, g.eta);
    }
    a(slot[v], slot[v]) -= 1.0 - out_rate;
  }
  // Proper iff every member reaches s.
  const std::vector<bool> to_s = Reachable(Reverse(adj), s);
  for (std::size_t v = 0; v < n; ++v) {
    if (slot[v] >= 0 && !to_s[v]) return {};
  }
  std::vector<double> h(n, 0.0);
  if (count == 0) return h;
  const Eigen::VectorXd sol = a.partialPivLu().solve(Eigen::VectorXd::Ones(count));
  for (std::size_t v = 0; v < n; ++v) {
    if (slot[v] >= 0) h[v] = sol(slot[v]);
  }
  return h;
}

inline double ReturnTimeFromRow(std::size_t s, const UncertainResponseGraph& g,
                                const SspLayout& layout, const std::vector<double>& h,
                                const std::vector<std::array<bool, 2>>& policy) {
  double lambda = 1.0;
  for (const Arc& arc : layout.certain[s]) lambda += arc.rate * h[arc.to];
  for (const auto& [w, i] : layout.uncertain[s]) {
    if (policy[i][Side(g, i, s)]) lambda += g.eta * h[w];
  }
  return lambda;
}

}  // namespace internal

struct SspOptions {
  int max_iterations = 10000;
  // Relative slack before a policy switch counts as an improvement.
  double tol = 1e-12;
};

// Extremal mean return time to s when every state orients its incident
// uncertain edges independently. Minimization handles states that cannot
// reach s almost surely (infinite cost). Maximization assumes s is not
// excludable; a policy that loses s signals a caller error.
inline SspResult SspExtremalReturnTime(std::size_t s, const UncertainResponseGraph& g, int m,
                                       SspObjective objective, const SspOptions& options = {}) {
  MAE_REQUIRE(s < g.num_nodes, "state out of range");
  MAE_REQUIRE(m >= 1, "population size m must be positive");
  const std::size_t n = g.num_nodes;
  const auto layout = internal::MakeLayout(g, m);
  SspResult result;
  result.policy.assign(g.uncertain.size(), {false, false});
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<bool> members(n, true);
  if (objective == SspObjective::kMinimize) {
    // Largest set from which s can be reached almost surely: drop states with
    // a forced move out of the set or no available path to s, until stable.
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<std::vector<std::size_t>> adj(n);
      for (std::size_t v = 0; v < n; ++v) {
        if (!members[v]) continue;
        for (const auto& arc : layout.certain[v]) {
          if (members[arc.to]) adj[v].push_back(arc.to);
        }
        for (const auto& [w, i] : layout.uncertain[v]) {
          if (members[w]) adj[v].push_back(w);
        }
      }
      const std::vector<bool> to_s = internal::Reachable(internal::Reverse(adj), s);
      for (std::size_t v = 0; v < n; ++v) {
        if (!members[v] || v == s) continue;
        bool drop = !to_s[v];
        for (const auto& arc : layout.certain[v]) drop = drop || !members[arc.to];
        if (drop) {
          members[v] = false;
          changed = true;
        }
      }
    }
    for (const auto& arc : layout.certain[s]) {
      if (!members[arc.to]) return result;  // s has a forced exit: infinite.
    }
    // Start from a shortest-path tree toward s.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rev(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (!members[v]) continue;
      for (const auto& arc : layout.certain[v]) rev[arc.to].push_back({v, SIZE_MAX});
      for (const auto& [w, i] : layout.uncertain[v]) {
        if (members[w]) rev[w].push_back({v, i});
      }
    }
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      const std::size_t w = queue.front();
      queue.pop_front();
      for (const auto& [v, i] : rev[w]) {
        if (seen[v]) continue;
        seen[v] = true;
        if (i != SIZE_MAX) result.policy[i][internal::Side(g, i, v)] = true;
        queue.push_back(v);
      }
    }
  } else {
    // Every state s can reach under some choice of orientations.
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (const auto& arc : layout.certain[v]) adj[v].push_back(arc.to);
      for (const auto& [w, i] : layout.uncertain[v]) adj[v].push_back(w);
    }
    members = internal::Reachable(adj, s);
    // Start from the cheapest policy; it is proper whenever s is not
    // excludable.
    const SspResult start = SspExtremalReturnTime(s, g, m, SspObjective::kMinimize, options);
    if (!std::isfinite(start.lambda)) {
      throw ContractViolation("maximum return time requested for an excludable state");
    }
    result.policy = start.policy;
  }

  std::vector<double> h;
  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    h = internal::EvaluatePolicy(s, g, layout, members, result.policy);
    if (h.empty()) {
      throw ContractViolation(
          "return-time iteration diverged: a policy loses the target state");
    }
    auto value = [&](std::size_t w) { return w == s ? 0.0 : (members[w] ? h[w] : kInf); };
    bool changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (!members[v]) continue;
      // Moving along edge to w replaces a stay (value h[v]; 0 for s itself)
      // by a step to w, so each edge is decided on its own.
      const double here = value(v);
      const double slack = options.tol * std::max(1.0, std::abs(here));
      for (const auto& [w, i] : layout.uncertain[v]) {
        const int side = internal::Side(g, i, v);
        const double there = value(w);
        bool out = result.policy[i][side];
        if (objective == SspObjective::kMinimize) {
          if (there < here - slack) out = true;
          if (there > here + slack) out = false;
        } else {
          if (there > here + slack) out = true;
          if (there < here - slack) out = false;
        }
        if (out != result.policy[i][side]) {
          result.policy[i][side] = out;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  result.lambda = internal::ReturnTimeFromRow(s, g, layout, h, result.policy);
  return result;
}

struct RankingInterval {
  std::size_t state = 0;
  double pi_lo = 0.0;
  double pi_hi = 0.0;
  bool excludable = false;
  double lambda_inf = 0.0;
  double lambda_sup = 0.0;
};

struct UncertaintyParams {
  PopulationMode mode = PopulationMode::kMulti;
  int m = 50;
  SspOptions ssp;
};

inline RankingInterval RankingWeightInterval(std::size_t s, const UncertainResponseGraph& g,
                                             const UncertaintyParams& params = {}) {
  RankingInterval out;
  out.state = s;
  out.excludable = MccMembershipExcludable(s, g);
  const SspResult lo = SspExtremalReturnTime(s, g, params.m, SspObjective::kMinimize, params.ssp);
  out.lambda_inf = lo.lambda;
  out.pi_hi = std::isfinite(lo.lambda) ? 1.0 / lo.lambda : 0.0;
  if (out.excludable) {
    out.lambda_sup = std::numeric_limits<double>::infinity();
    out.pi_lo = 0.0;
  } else {
    const SspResult hi =
        SspExtremalReturnTime(s, g, params.m, SspObjective::kMaximize, params.ssp);
    out.lambda_sup = hi.lambda;
    out.pi_lo = 1.0 / hi.lambda;
  }
  out.pi_lo = std::min(out.pi_lo, out.pi_hi);
  return out;
}

inline RankingInterval RankingWeightInterval(std::size_t s, const PayoffBounds& bounds,
                                             const UncertaintyParams& params = {}) {
  return RankingWeightInterval(s, ClassifyEdges(bounds, params.mode), params);
}

inline std::vector<RankingInterval> AllRankingIntervals(const PayoffBounds& bounds,
                                                        const UncertaintyParams& params = {}) {
  const UncertainResponseGraph g = ClassifyEdges(bounds, params.mode);
  std::vector<RankingInterval> out;
  out.reserve(g.num_nodes);
  for (std::size_t s = 0; s < g.num_nodes; ++s) out.push_back(RankingWeightInterval(s, g, params));
  return out;
}

// Point weights of a known game: each state's mass within its own sink
// component of the unperturbed infinite-alpha chain, zero if transient.
inline std::vector<double> SinkConditionalWeights(const PayoffTensor& game,
                                                  const UncertaintyParams& params = {}) {
  const auto intervals = AllRankingIntervals(ExactBounds(game), params);
  std::vector<double> out;
  for (const auto& r : intervals) out.push_back(r.pi_hi);
  return out;
}

inline std::string StateLabel(const GameShape& shape, PopulationMode mode, std::size_t s) {
  if (mode == PopulationMode::kSingle) return std::to_string(s);
  std::string label;
  for (int v : shape.Profile(s)) {
    if (!label.empty()) label += ' ';
    label += std::to_string(v);
  }
  return label;
}

// Plot-data rows: state, pi_lo, pi_hi, payoff_uncertainty_level.
inline std::string RankingIntervalsCsv(const std::vector<RankingInterval>& intervals,
                                       const GameShape& shape, PopulationMode mode,
                                       double level, bool header = true) {
  std::ostringstream out;
  if (header) out << "state,pi_lo,pi_hi,payoff_uncertainty_level\n";
  for (const auto& r : intervals) {
    out << '"' << StateLabel(shape, mode, r.state) << "\"," << FormatDouble(r.pi_lo) << ','
        << FormatDouble(r.pi_hi) << ',' << FormatDouble(level) << '\n';
  }
  return out.str();
}

}  // namespace mae

#endif  // MAE_UNCERTAINTY_HPP_
