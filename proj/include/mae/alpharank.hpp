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

#ifndef MAE_ALPHARANK_HPP_
#define MAE_ALPHARANK_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"
#include "mae/errors.hpp"
#include "mae/game.hpp"
#include "mae/response_graph.hpp"

namespace mae {

enum class PopulationMode { kMulti, kSingle };

struct AlphaRankParams {
  // Selection intensity; ignored when infinite_alpha is set.
  double alpha = 10.0;
  bool infinite_alpha = false;
  // Population size.
  int m = 50;
  // Mass given to payoff-worsening moves in infinite-alpha mode.
  double perturbation = 1e-4;
  // Infinite-alpha multi-population runs sweep perturbation 1e-1 ... 1e-8
  // until two consecutive orderings agree.
  bool sweep_perturbation = true;
  PopulationMode mode = PopulationMode::kMulti;

  void Validate() const {
    MAE_REQUIRE(m >= 1, "population size m must be positive");
    if (infinite_alpha) {
      MAE_REQUIRE(perturbation > 0.0 && perturbation < 1.0,
                  "perturbation must lie in (0, 1)");
    } else {
      MAE_REQUIRE(alpha >= 0.0 && std::isfinite(alpha), "alpha must be finite and >= 0");
      MAE_REQUIRE(m >= 2, "finite-alpha mode needs m >= 2");
    }
  }
};

// Fixation ratio (1 - e^{-x}) / (1 - e^{-m x}) for x = alpha * payoff gain,
// evaluated without overflow for any finite x. Equals 1/m at x = 0.
inline double FixationRatio(double x, int m) {
  if (x == 0.0) return 1.0 / m;
  if (x > 0.0) return std::expm1(-x) / std::expm1(-m * x);
  // (e^y - 1) / (e^{m y} - 1) = e^{-(m-1) y} (1 - e^{-y}) / (1 - e^{-m y})
  const double y = -x;
  const double log_ratio = -(m - 1.0) * y + std::log(-std::expm1(-y)) -
                           std::log(-std::expm1(-m * y));
  return std::exp(log_ratio);
}

struct TransitionModel {
  // Profile indices (multi-population) or strategies (single-population).
  std::vector<std::size_t> states;
  Eigen::MatrixXd matrix;
  double eta = 0.0;
  PopulationMode mode = PopulationMode::kMulti;
};

namespace internal {

// Calls fn(from, to, gain) for each ordered state pair the chain may move
// along, with gain the payoff improvement of the move.
template <typename Fn>
void ForEachMove(const PayoffTensor& game, PopulationMode mode, Fn&& fn) {
  const GameShape& shape = game.shape();
  if (mode == PopulationMode::kMulti) {
    ForEachDeviationPair(shape, [&](std::size_t a, std::size_t b, int k) {
      fn(a, b, game(k, b) - game(k, a));
      fn(b, a, game(k, a) - game(k, b));
    });
    return;
  }
  MAE_REQUIRE(shape.num_players() == 2 && shape.num_strategies(0) == shape.num_strategies(1),
              "single-population mode needs a square two-player game");
  const int n = shape.num_strategies(0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      // Mutant j invading resident i.
      fn(i, j, game(0, shape.Index({j, i})) - game(0, shape.Index({i, j})));
    }
  }
}

inline TransitionModel EmptyModel(const PayoffTensor& game, PopulationMode mode) {
  TransitionModel model;
  model.mode = mode;
  const std::size_t n = mode == PopulationMode::kMulti ? game.shape().num_profiles()
                                                       : game.shape().num_strategies(0);
  model.states.resize(n);
  std::iota(model.states.begin(), model.states.end(), 0);
  model.matrix = Eigen::MatrixXd::Zero(n, n);
  if (mode == PopulationMode::kMulti) {
    model.eta = game.shape().eta();
  } else {
    model.eta = n > 1 ? 1.0 / (n - 1) : 0.0;
  }
  return model;
}

inline void FillDiagonal(Eigen::MatrixXd& c) {
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (j != i) off += c(i, j);
    }
    c(i, i) = 1.0 - off;
  }
}

}  // namespace internal

// Finite-alpha transition matrix: moves along a single deviation with payoff
// change d get eta * (1 - e^{-alpha d}) / (1 - e^{-alpha m d}), or eta / m
// when d = 0; the diagonal takes the remaining mass.
inline TransitionModel BuildTransitionMatrix(const PayoffTensor& game,
                                             const AlphaRankParams& params) {
  params.Validate();
  MAE_REQUIRE(!params.infinite_alpha, "use BuildInfiniteAlphaTransitions");
  TransitionModel model = internal::EmptyModel(game, params.mode);
  internal::ForEachMove(game, params.mode, [&](std::size_t from, std::size_t to, double d) {
    model.matrix(from, to) =
        d == 0.0 ? model.eta / params.m : model.eta * FixationRatio(params.alpha * d, params.m);
  });
  internal::FillDiagonal(model.matrix);
  return model;
}

// Infinite-alpha limit with perturbation: improving moves get eta,
// equal-payoff moves eta / m, worsening moves eta * perturbation.
inline TransitionModel BuildInfiniteAlphaTransitions(const PayoffTensor& game,
                                                     const AlphaRankParams& params) {
  MAE_REQUIRE(params.perturbation >= 0.0 && params.perturbation < 1.0,
              "perturbation must lie in [0, 1)");
  MAE_REQUIRE(params.m >= 1, "population size m must be positive");
  TransitionModel model = internal::EmptyModel(game, params.mode);
  internal::ForEachMove(game, params.mode, [&](std::size_t from, std::size_t to, double d) {
    if (d > 0.0) {
      model.matrix(from, to) = model.eta;
    } else if (d < 0.0) {
      model.matrix(from, to) = model.eta * params.perturbation;
    } else {
      model.matrix(from, to) = model.eta / params.m;
    }
  });
  internal::FillDiagonal(model.matrix);
  return model;
}

// Stationary distribution plus states grouped by descending mass.
struct RankingDistribution {
  std::vector<std::size_t> states;
  std::vector<double> pi;
  std::vector<std::vector<std::size_t>> ordering;
  // Perturbation actually used (infinite-alpha only) and whether the sweep
  // settled before its last level.
  double perturbation = 0.0;
  bool converged = true;
};

// Buckets of state positions in descending mass; a state joins the current
// bucket when within tie_tol of the bucket's first (largest) member.
inline std::vector<std::vector<std::size_t>> OrderByMass(const std::vector<double>& pi,
                                                         double tie_tol) {
  std::vector<std::size_t> order(pi.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pi[a] > pi[b]; });
  std::vector<std::vector<std::size_t>> buckets;
  for (std::size_t idx : order) {
    if (!buckets.empty() && pi[buckets.back().front()] - pi[idx] <= tie_tol) {
      buckets.back().push_back(idx);
    } else {
      buckets.push_back({idx});
    }
  }
  for (auto& b : buckets) std::sort(b.begin(), b.end());
  return buckets;
}

// Grassmann-Taksar-Heyman elimination. Subtraction-free, so it stays
// accurate for nearly reducible chains with tiny perturbations. Requires an
// irreducible chain.
inline std::vector<double> StationaryGth(Eigen::MatrixXd p) {
  const Eigen::Index n = p.rows();
  for (Eigen::Index k = n - 1; k > 0; --k) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) s += p(k, j);
    if (!(s > 0.0)) {
      throw InputError("transition matrix is reducible; stationary distribution is not unique");
    }
    for (Eigen::Index i = 0; i < k; ++i) p(i, k) /= s;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double pik = p(i, k);
      if (pik == 0.0) continue;
      for (Eigen::Index j = 0; j < k; ++j) p(i, j) += pik * p(k, j);
    }
  }
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  double total = 1.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) v += pi[i] * p(i, k);
    pi[k] = v;
    total += v;
  }
  for (double& v : pi) v /= total;
  return pi;
}

inline double StationaryResidual(const Eigen::MatrixXd& c, const std::vector<double>& pi) {
  const Eigen::Map<const Eigen::RowVectorXd> row(pi.data(), static_cast<Eigen::Index>(pi.size()));
  return (row * c - row).cwiseAbs().maxCoeff();
}

struct StationaryOptions {
  double tol = 1e-10;
  double tie_tol = 1e-8;
  // Chains up to this size use the direct solver.
  std::size_t dense_limit = 512;
  int max_iterations = 1000000;
};

// Invariant distribution of an irreducible chain, with ||pi C - pi||_inf
// <= tol checked on exit.
inline RankingDistribution StationaryDistribution(const TransitionModel& model,
                                                  const StationaryOptions& options = {}) {
  const Eigen::Index n = model.matrix.rows();
  MAE_REQUIRE(n > 0, "empty transition model");
  RankingDistribution out;
  out.states = model.states;
  if (static_cast<std::size_t>(n) <= options.dense_limit) {
    out.pi = StationaryGth(model.matrix);
  } else {
    // Lazy chain (I + C) / 2 has the same invariant distribution and is
    // aperiodic.
    const Eigen::MatrixXd lazy =
        0.5 * (model.matrix + Eigen::MatrixXd::Identity(n, n));
    Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(n, 1.0 / n);
    double residual = std::numeric_limits<double>::infinity();
    int it = 0;
    // A lazy step moves pi by half its residual under C; stop with margin.
    for (; it < options.max_iterations && residual > 0.25 * options.tol; ++it) {
      Eigen::RowVectorXd next = pi * lazy;
      next /= next.sum();
      residual = (next - pi).cwiseAbs().maxCoeff();
      pi = std::move(next);
    }
    out.pi.assign(pi.data(), pi.data() + n);
    if (residual > 0.25 * options.tol) {
      throw ConvergenceError("power iteration did not converge", residual);
    }
  }
  const double residual = StationaryResidual(model.matrix, out.pi);
  if (residual > options.tol) {
    throw ConvergenceError("stationary residual above tolerance", residual);
  }
  out.ordering = OrderByMass(out.pi, options.tie_tol);
  return out;
}

// Full ranking pipeline: transition model, stationary distribution, ordering.
inline RankingDistribution AlphaRank(const PayoffTensor& game, const AlphaRankParams& params,
                                     const StationaryOptions& options = {}) {
  params.Validate();
  if (!params.infinite_alpha) {
    return StationaryDistribution(BuildTransitionMatrix(game, params), options);
  }
  if (!params.sweep_perturbation || params.mode == PopulationMode::kSingle) {
    RankingDistribution out =
        StationaryDistribution(BuildInfiniteAlphaTransitions(game, params), options);
    out.perturbation = params.perturbation;
    return out;
  }
  RankingDistribution previous;
  bool have_previous = false;
  AlphaRankParams level = params;
  for (int e = 1; e <= 8; ++e) {
    level.perturbation = std::pow(10.0, -e);
    RankingDistribution current =
        StationaryDistribution(BuildInfiniteAlphaTransitions(game, level), options);
    current.perturbation = level.perturbation;
    if (have_previous && current.ordering == previous.ordering) {
      current.converged = true;
      return current;
    }
    previous = std::move(current);
    have_previous = true;
  }
  previous.converged = false;
  return previous;
}

inline nlohmann::json RankingToJson(const RankingDistribution& ranking,
                                    const PayoffTensor& game, const AlphaRankParams& params) {
  nlohmann::json doc;
  nlohmann::json states = nlohmann::json::array();
  for (std::size_t s : ranking.states) {
    if (params.mode == PopulationMode::kMulti) {
      states.push_back(game.shape().Profile(s));
    } else {
      states.push_back(s);
    }
  }
  doc["states"] = states;
  doc["pi"] = ranking.pi;
  doc["ordering"] = ranking.ordering;
  doc["params"] = {
      {"alpha", params.infinite_alpha ? nlohmann::json("inf") : nlohmann::json(params.alpha)},
      {"m", params.m},
      {"perturbation", ranking.perturbation},
      {"sweep_converged", ranking.converged},
      {"population_mode", params.mode == PopulationMode::kMulti ? "multi" : "single"}};
  return doc;
}

}  // namespace mae

#endif  // MAE_ALPHARANK_HPP_
