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

// Low-rank completion of a partially observed two-player win-probability
// matrix by alternating least squares, optionally in logit or odds space,
// followed by ranking of the completed game.

#ifndef MAE_COMPLETION_HPP_
#define MAE_COMPLETION_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mae/alpharank.hpp"
#include "mae/elo.hpp"
#include "mae/errors.hpp"
#include "mae/game.hpp"
#include "mae/metrics.hpp"
#include "mae/rng.hpp"

namespace mae {

enum class CompletionTransform { kPayoff, kLogit, kOdds };

inline std::string ToString(CompletionTransform t) {
  switch (t) {
    case CompletionTransform::kPayoff: return "payoff";
    case CompletionTransform::kLogit: return "logit";
    case CompletionTransform::kOdds: return "odds";
  }
  return "?";
}

inline CompletionTransform ParseTransform(const std::string& s) {
  if (s == "payoff") return CompletionTransform::kPayoff;
  if (s == "logit") return CompletionTransform::kLogit;
  if (s == "odds") return CompletionTransform::kOdds;
  throw InputError("unknown completion transform '" + s + "'");
}

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct MaskedMatrix {
  Eigen::MatrixXd values;
  // True where the entry is observed.
  BoolMatrix mask;

  void Validate() const {
    MAE_REQUIRE(values.rows() == mask.rows() && values.cols() == mask.cols(),
                "mask shape differs from value shape");
    MAE_REQUIRE(mask.count() > 0, "no observed entries");
  }
};

inline constexpr double kPayoffClip = 1e-6;
inline constexpr double kOddsFloor = 1e-9;

inline double ForwardTransform(CompletionTransform t, double p) {
  switch (t) {
    case CompletionTransform::kPayoff: return p;
    case CompletionTransform::kLogit: return std::log(p) - std::log1p(-p);
    case CompletionTransform::kOdds: return p / (1.0 - p);
  }
  return p;
}

// Inverse transform without clipping; exact round trip on (0, 1).
inline double InverseTransform(CompletionTransform t, double x) {
  switch (t) {
    case CompletionTransform::kPayoff: return x;
    case CompletionTransform::kLogit: return Logistic(x);
    case CompletionTransform::kOdds: return x / (1.0 + x);
  }
  return x;
}

// Inverse transform of a completed value, clipped to a valid probability.
inline double RecoverPayoff(CompletionTransform t, double x) {
  if (t == CompletionTransform::kOdds) x = std::max(x, kOddsFloor);
  return std::clamp(InverseTransform(t, x), kPayoffClip, 1.0 - kPayoffClip);
}

inline MaskedMatrix ApplyTransform(const MaskedMatrix& payoffs, CompletionTransform t) {
  payoffs.Validate();
  MaskedMatrix out = payoffs;
  for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
      if (!out.mask(i, j)) continue;
      const double p = out.values(i, j);
      if (t != CompletionTransform::kPayoff) {
        MAE_REQUIRE(p > 0.0 && p < 1.0, "logit and odds transforms need payoffs in (0, 1)");
      }
      out.values(i, j) = ForwardTransform(t, p);
    }
  }
  return out;
}

struct CompletionOptions {
  int rank = 1;
  int iterations = 200;
  // Added to the normal equations only when they are numerically singular.
  double ridge = 1e-10;
  // Independent random starts; the run with the lowest final objective wins.
  // Single starts stall in spurious basins on a sizable share of instances.
  int restarts = 8;
};

struct CompletionResult {
  Eigen::MatrixXd completed;
  // Masked squared error of the winning start, after initialization and
  // after each sweep.
  std::vector<double> objective;
  // Every row and column has at least `rank` observations.
  bool well_posed = true;
};

inline double MaskedSquaredError(const MaskedMatrix& m, const Eigen::MatrixXd& estimate) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      if (m.mask(i, j)) {
        const double d = estimate(i, j) - m.values(i, j);
        total += d * d;
      }
    }
  }
  return total;
}

namespace internal {

// Least-squares update of every row of `x` against fixed factor `y`, fitting
// row i of x to the observed entries of row i of values (transposed when
// `by_column`).
inline void AlsHalfStep(const MaskedMatrix& m, bool by_column, const Eigen::MatrixXd& y,
                        Eigen::MatrixXd& x, double ridge) {
  const Eigen::Index rows = by_column ? m.values.cols() : m.values.rows();
  const Eigen::Index cols = by_column ? m.values.rows() : m.values.cols();
  const Eigen::Index r = y.cols();
  for (Eigen::Index i = 0; i < rows; ++i) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(r, r);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r);
    for (Eigen::Index j = 0; j < cols; ++j) {
      const bool seen = by_column ? m.mask(j, i) : m.mask(i, j);
      if (!seen) continue;
      const double v = by_column ? m.values(j, i) : m.values(i, j);
      gram.noalias() += y.row(j).transpose() * y.row(j);
      rhs.noalias() += v * y.row(j).transpose();
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    const double scale = std::max(1.0, gram.diagonal().maxCoeff());
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 1e-12 * scale) {
      ldlt.compute(gram + ridge * Eigen::MatrixXd::Identity(r, r));
    }
    x.row(i) = ldlt.solve(rhs).transpose();
  }
}

}  // namespace internal

// Factors A (n x r), B (m x r) with A B^T fitted to the observed entries,
// updated alternately in closed form.
inline CompletionResult AlternatingMinimization(const MaskedMatrix& m,
                                                const CompletionOptions& options,
                                                Rng& rng) {
  m.Validate();
  const Eigen::Index n = m.values.rows();
  const Eigen::Index c = m.values.cols();
  MAE_REQUIRE(options.rank >= 1 && options.rank <= std::min(n, c),
              "rank must lie in [1, min dimension]");
  MAE_REQUIRE(options.iterations >= 1, "need at least one iteration");
  CompletionResult out;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.well_posed = out.well_posed && m.mask.row(i).count() >= options.rank;
  }
  for (Eigen::Index j = 0; j < c; ++j) {
    out.well_posed = out.well_posed && m.mask.col(j).count() >= options.rank;
  }

  MAE_REQUIRE(options.restarts >= 1, "need at least one start");
  const double init_scale = 1.0 / std::sqrt(static_cast<double>(options.rank));
  for (int start = 0; start < options.restarts; ++start) {
    Eigen::MatrixXd a(n, options.rank), b(c, options.rank);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = init_scale * rng.Normal();
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = init_scale * rng.Normal();
    std::vector<double> objective{MaskedSquaredError(m, a * b.transpose())};
    for (int it = 0; it < options.iterations; ++it) {
      internal::AlsHalfStep(m, false, b, a, options.ridge);
      internal::AlsHalfStep(m, true, a, b, options.ridge);
      objective.push_back(MaskedSquaredError(m, a * b.transpose()));
    }
    if (start == 0 || objective.back() < out.objective.back()) {
      out.objective = std::move(objective);
      out.completed = a * b.transpose();
    }
  }
  return out;
}

// Bernoulli(rate) observation mask.
inline BoolMatrix RandomMask(Eigen::Index rows, Eigen::Index cols, double rate,
                             Rng& rng) {
  MAE_REQUIRE(rate > 0.0 && rate <= 1.0, "observation rate must lie in (0, 1]");
  BoolMatrix mask(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) mask(i, j) = rng.Bernoulli(rate);
  }
  return mask;
}

// Two-player constant-sum game with player-one win probabilities p.
inline PayoffTensor WinLossGame(const Eigen::MatrixXd& p) {
  std::vector<std::vector<double>> p1(p.rows(), std::vector<double>(p.cols()));
  std::vector<std::vector<double>> p2 = p1;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      p1[i][j] = p(i, j);
      p2[i][j] = 1.0 - p(i, j);
    }
  }
  return PayoffTensor::TwoPlayer(p1, p2, 1.0);
}

struct CompleteAndRankResult {
  Eigen::MatrixXd payoffs;
  CompletionResult completion;
  RankingDistribution ranking;
  std::optional<double> kendall_error;
};

// Completes a payoff matrix in the chosen transform space, maps back to
// clipped probabilities, ranks the (P, 1 - P) game, and scores the ranking
// against the truth's ranking when one is given.
inline CompleteAndRankResult CompleteAndRank(const MaskedMatrix& payoffs,
                                             CompletionTransform transform,
                                             const CompletionOptions& options,
                                             const AlphaRankParams& params, Rng& rng,
                                             const std::optional<Eigen::MatrixXd>& truth = {},
                                             double tie_tol = 1e-8) {
  CompleteAndRankResult out;
  out.completion = AlternatingMinimization(ApplyTransform(payoffs, transform), options, rng);
  out.payoffs = out.completion.completed.unaryExpr(
      [transform](double x) { return RecoverPayoff(transform, x); });
  StationaryOptions so;
  so.tie_tol = tie_tol;
  out.ranking = AlphaRank(WinLossGame(out.payoffs), params, so);
  if (truth) {
    const RankingDistribution reference = AlphaRank(WinLossGame(*truth), params, so);
    out.kendall_error = KendallPartial(RankingFromDistribution(reference, tie_tol),
                                       RankingFromDistribution(out.ranking, tie_tol));
  }
  return out;
}

}  // namespace mae

#endif  // MAE_COMPLETION_HPP_
