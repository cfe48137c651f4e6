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


// Independent reference computations shared by the unit and acceptance
// tests. They favor directness over speed.

#ifndef MAE_TESTS_ORACLES_HPP_
#define MAE_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstddef>
#include <set>
#include <vector>

#include "mae/game.hpp"
#include "mae/response_graph.hpp"
#include "mae/uncertainty.hpp"

namespace mae::testing {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

// (1 - e^{-alpha d}) / (1 - e^{-alpha m d}) in 50-digit arithmetic; 1/m at d = 0.
inline double OracleFixation(double alpha, int m, double d) {
  if (d == 0.0) return 1.0 / m;
  const BigFloat x = BigFloat(alpha) * BigFloat(d);
  const BigFloat num = 1 - boost::multiprecision::exp(-x);
  const BigFloat den = 1 - boost::multiprecision::exp(-BigFloat(m) * x);
  return static_cast<double>(num / den);
}

// Transition matrix built by scanning every ordered profile pair.
inline Eigen::MatrixXd OracleMatrix(const PayoffTensor& g, double alpha, int m) {
  const GameShape& shape = g.shape();
  const std::size_t n = shape.num_profiles();
  int deviations = 0;
  for (int k = 0; k < shape.num_players(); ++k) deviations += shape.num_strategies(k) - 1;
  const double eta = 1.0 / deviations;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto si = shape.Profile(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto sj = shape.Profile(j);
      int differ = 0, player = -1;
      for (int k = 0; k < shape.num_players(); ++k) {
        if (si[k] != sj[k]) {
          ++differ;
          player = k;
        }
      }
      if (differ != 1) continue;
      c(i, j) = eta * OracleFixation(alpha, m, g(player, j) - g(player, i));
    }
    c(i, i) = 1.0 - c.row(i).sum();
  }
  return c;
}

struct EnumeratedInterval {
  double pi_lo = 1.0;
  double pi_hi = 0.0;
  bool excludable = false;
};

// Weight of s within its sink component for one fully oriented graph, or 0
// when s is transient. The component's chain moves along each out-arc at
// rate eta (eta / m for ties) and stays put otherwise.
inline double SinkWeight(std::size_t s, std::size_t n,
                         const std::vector<std::vector<std::pair<std::size_t, double>>>& arcs) {
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& [w, rate] : arcs[v]) succ[v].push_back(w);
  }
  for (const auto& sink : FindSinkComponents(succ)) {
    if (!std::binary_search(sink.begin(), sink.end(), s)) continue;
    const Eigen::Index k = static_cast<Eigen::Index>(sink.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      double out = 0.0;
      for (const auto& [w, rate] : arcs[sink[i]]) {
        const auto j = std::lower_bound(sink.begin(), sink.end(), w) - sink.begin();
        c(i, j) += rate;
        out += rate;
      }
      c(i, i) += 1.0 - out;
    }
    Eigen::MatrixXd a = (c - Eigen::MatrixXd::Identity(k, k)).transpose();
    a.row(k - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs(k - 1) = 1.0;
    const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
    return pi(std::lower_bound(sink.begin(), sink.end(), s) - sink.begin());
  }
  return 0.0;
}

// Exhaustive search over all 2^U orientations of the uncertain edges.
inline EnumeratedInterval EnumerateOrientations(std::size_t s, const UncertainResponseGraph& g,
                                                int m) {
  const std::size_t u = g.uncertain.size();
  EnumeratedInterval out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << u); ++mask) {
    std::vector<std::vector<std::pair<std::size_t, double>>> arcs(g.num_nodes);
    for (const auto& e : g.certain) {
      if (e.flag == EdgeFlag::kTie) {
        arcs[e.from].push_back({e.to, g.eta / m});
        arcs[e.to].push_back({e.from, g.eta / m});
      } else {
        arcs[e.from].push_back({e.to, g.eta});
      }
    }
    for (std::size_t i = 0; i < u; ++i) {
      const auto& e = g.uncertain[i];
      if (mask >> i & 1) {
        arcs[e.a].push_back({e.b, g.eta});
      } else {
        arcs[e.b].push_back({e.a, g.eta});
      }
    }
    const double w = SinkWeight(s, g.num_nodes, arcs);
    out.pi_lo = std::min(out.pi_lo, w);
    out.pi_hi = std::max(out.pi_hi, w);
    out.excludable = out.excludable || w == 0.0;
  }
  return out;
}

}  // namespace mae::testing

#endif  // MAE_TESTS_ORACLES_HPP_
