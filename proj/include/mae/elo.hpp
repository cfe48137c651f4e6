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

// Batch Elo: logistic ratings fitted to a batch of two-player outcomes by
// minimizing the cross-entropy between observed payoffs and
// q_ab = 1 / (1 + e^{-(r_a - r_b)}), plus a small ridge term that keeps the
// optimum finite when one strategy always wins.

#ifndef MAE_ELO_HPP_
#define MAE_ELO_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mae/errors.hpp"
#include "mae/sample_complexity.hpp"

namespace mae {

struct OutcomeRecord {
  int a = 0;
  int b = 0;
  // Payoff to a in [0, 1]; 1 is a win for a.
  double u = 0.0;
  // Number of identical records this entry stands for.
  double weight = 1.0;
};

class OutcomeBatch {
 public:
  OutcomeBatch() = default;
  explicit OutcomeBatch(int num_strategies) : num_strategies_(num_strategies) {
    MAE_REQUIRE(num_strategies >= 1, "need at least one strategy");
  }

  int num_strategies() const { return num_strategies_; }
  const std::vector<OutcomeRecord>& records() const { return records_; }

  void Add(int a, int b, double u, double weight = 1.0) {
    MAE_REQUIRE(a >= 0 && a < num_strategies_ && b >= 0 && b < num_strategies_,
                "strategy index out of range");
    MAE_REQUIRE(a != b, "a strategy cannot play itself in a rating batch");
    MAE_REQUIRE(u >= 0.0 && u <= 1.0, "payoff must lie in [0, 1]");
    MAE_REQUIRE(weight >= 0.0, "record weight must be nonnegative");
    records_.push_back({a, b, u, weight});
  }

  // Aggregated form: win_rate[a][b] is a's mean payoff against b over
  // counts[a][b] games. Diagonal entries and zero counts are skipped.
  static OutcomeBatch FromWinMatrix(const std::vector<std::vector<double>>& win_rate,
                                    const std::vector<std::vector<double>>& counts) {
    const int n = static_cast<int>(win_rate.size());
    MAE_REQUIRE(counts.size() == win_rate.size(), "count matrix shape mismatch");
    OutcomeBatch batch(n);
    for (int a = 0; a < n; ++a) {
      MAE_REQUIRE(static_cast<int>(win_rate[a].size()) == n &&
                      static_cast<int>(counts[a].size()) == n,
                  "win matrix must be square");
      for (int b = 0; b < n; ++b) {
        if (a == b || counts[a][b] == 0.0) continue;
        batch.Add(a, b, win_rate[a][b], counts[a][b]);
      }
    }
    return batch;
  }

  // Unordered pairs with no record in either direction.
  std::vector<std::pair<int, int>> UncoveredPairs() const {
    std::vector<std::vector<bool>> seen(num_strategies_, std::vector<bool>(num_strategies_));
    for (const auto& r : records_) {
      if (r.weight > 0.0) seen[r.a][r.b] = seen[r.b][r.a] = true;
    }
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < num_strategies_; ++a) {
      for (int b = a + 1; b < num_strategies_; ++b) {
        if (!seen[a][b]) out.emplace_back(a, b);
      }
    }
    return out;
  }

 private:
  int num_strategies_ = 0;
  std::vector<OutcomeRecord> records_;
};

struct EloRatings {
  std::vector<double> ratings;
  double reg = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<std::pair<int, int>> uncovered;
};

inline double Logistic(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// -log(q) for q = Logistic(x), without overflow.
inline double LogLoss(double x) {
  return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

struct EloFitOptions {
  double reg = 1e-9;
  double gradient_tol = 1e-8;
  int max_iterations = 500;
};

namespace internal {

inline double EloObjective(const OutcomeBatch& batch, const Eigen::VectorXd& r, double reg) {
  double total = reg * r.squaredNorm();
  for (const auto& rec : batch.records()) {
    const double d = r(rec.a) - r(rec.b);
    total += rec.weight * (rec.u * LogLoss(d) + (1.0 - rec.u) * LogLoss(-d));
  }
  return total;
}

}  // namespace internal

// Damped Newton on a convex objective. The gauge direction (all ratings
// shifted together) carries no loss, so the Hessian is completed along it
// and iterates are kept mean-centred.
inline EloRatings BatchEloFit(const OutcomeBatch& batch, const EloFitOptions& options = {}) {
  const int n = batch.num_strategies();
  MAE_REQUIRE(!batch.records().empty(), "need at least one outcome");
  MAE_REQUIRE(options.reg >= 0.0, "regularization must be nonnegative");
  std::vector<bool> appears(n, false);
  for (const auto& rec : batch.records()) {
    if (rec.weight > 0.0) appears[rec.a] = appears[rec.b] = true;
  }
  for (int i = 0; i < n; ++i) {
    MAE_REQUIRE(appears[i], "strategy " + std::to_string(i) + " has no recorded outcome");
  }

  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  const Eigen::MatrixXd gauge = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  EloRatings out;
  out.reg = options.reg;
  out.uncovered = batch.UncoveredPairs();
  for (int it = 0; it <= options.max_iterations; ++it) {
    Eigen::VectorXd grad = 2.0 * options.reg * r;
    Eigen::MatrixXd hess = 2.0 * options.reg * Eigen::MatrixXd::Identity(n, n);
    for (const auto& rec : batch.records()) {
      const double q = Logistic(r(rec.a) - r(rec.b));
      const double g = rec.weight * (q - rec.u);
      const double w = rec.weight * q * (1.0 - q);
      grad(rec.a) += g;
      grad(rec.b) -= g;
      hess(rec.a, rec.a) += w;
      hess(rec.b, rec.b) += w;
      hess(rec.a, rec.b) -= w;
      hess(rec.b, rec.a) -= w;
    }
    out.gradient_norm = grad.norm();
    out.iterations = it;
    if (out.gradient_norm < options.gradient_tol) {
      out.ratings.assign(r.data(), r.data() + n);
      return out;
    }
    if (it == options.max_iterations) break;
    const Eigen::VectorXd step = (hess + gauge).ldlt().solve(-grad);
    const double f0 = internal::EloObjective(batch, r, options.reg);
    // Near the optimum the decrease drops below rounding error in f; allow
    // that much slack so full Newton steps still go through.
    const double noise = 1e-13 * std::max(1.0, std::abs(f0));
    double t = 1.0;
    Eigen::VectorXd next = r + step;
    while (internal::EloObjective(batch, next, options.reg) >
               f0 + 1e-4 * t * grad.dot(step) + noise &&
           t > 1e-12) {
      t *= 0.5;
      next = r + t * step;
    }
    r = next.array() - next.mean();
  }
  throw ConvergenceError("batch Elo fit did not converge", out.gradient_norm);
}

inline double EloPredict(const EloRatings& ratings, int a, int b) {
  const int n = static_cast<int>(ratings.ratings.size());
  MAE_REQUIRE(a >= 0 && a < n && b >= 0 && b < n, "unknown strategy");
  return Logistic(ratings.ratings[a] - ratings.ratings[b]);
}

// Samples per pair so every fitted win probability lies within epsilon of
// the truth with probability 1 - delta: N > 0.5 n^2 epsilon^{-2} log(n^2 / delta).
inline SampleBound EloSampleComplexity(int num_strategies, double epsilon, double delta) {
  MAE_REQUIRE(num_strategies >= 1, "need at least one strategy");
  MAE_REQUIRE(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0,
              "epsilon and delta must lie in (0, 1)");
  const double n2 = static_cast<double>(num_strategies) * num_strategies;
  const double log_rhs =
      std::log(0.5 * n2) - 2.0 * std::log(epsilon) + std::log(std::log(n2 / delta));
  return BoundFromLog(log_rhs);
}

inline nlohmann::json EloToJson(const EloRatings& ratings,
                                const std::vector<std::string>& names = {}) {
  nlohmann::json strategies = nlohmann::json::array();
  for (std::size_t i = 0; i < ratings.ratings.size(); ++i) {
    strategies.push_back(i < names.size() ? names[i] : std::to_string(i));
  }
  nlohmann::json uncovered = nlohmann::json::array();
  for (const auto& [a, b] : ratings.uncovered) uncovered.push_back({a, b});
  return {{"strategies", strategies},
          {"ratings", ratings.ratings},
          {"reg", ratings.reg},
          {"uncovered_pairs", uncovered}};
}

}  // namespace mae

#endif  // MAE_ELO_HPP_
