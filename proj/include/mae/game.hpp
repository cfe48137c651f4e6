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

#ifndef MAE_GAME_HPP_
#define MAE_GAME_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mae/errors.hpp"
#include "mae/rng.hpp"

namespace mae {

// One strategy index per player.
using StrategyProfile = std::vector<int>;

// Number of strategies per player. Profiles map to flat indices in row-major
// (mixed-radix) order: the last player's strategy varies fastest, so in a
// two-player game index = s1 * |S2| + s2.
class GameShape {
 public:
  GameShape() = default;
  explicit GameShape(std::vector<int> strategy_counts)
      : counts_(std::move(strategy_counts)) {
    MAE_REQUIRE(!counts_.empty(), "game needs at least one player");
    for (int c : counts_) {
      MAE_REQUIRE(c >= 1, "every player needs at least one strategy");
    }
    strides_.assign(counts_.size(), 1);
    for (int k = static_cast<int>(counts_.size()) - 2; k >= 0; --k) {
      strides_[k] = strides_[k + 1] * static_cast<std::size_t>(counts_[k + 1]);
    }
    num_profiles_ = strides_[0] * static_cast<std::size_t>(counts_[0]);
  }

  int num_players() const { return static_cast<int>(counts_.size()); }
  int num_strategies(int player) const { return counts_.at(player); }
  const std::vector<int>& strategy_counts() const { return counts_; }
  std::size_t num_profiles() const { return num_profiles_; }

  // Number of single-player deviations available from any profile.
  int num_deviations() const {
    int total = 0;
    for (int c : counts_) total += c - 1;
    return total;
  }

  // Reciprocal of num_deviations(); zero when no deviation exists.
  double eta() const {
    const int d = num_deviations();
    return d > 0 ? 1.0 / d : 0.0;
  }

  bool IsValid(const StrategyProfile& s) const {
    if (s.size() != counts_.size()) return false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] < 0 || s[k] >= counts_[k]) return false;
    }
    return true;
  }

  std::size_t Index(const StrategyProfile& s) const {
    if (!IsValid(s)) throw InputError("invalid strategy profile for shape");
    std::size_t index = 0;
    for (std::size_t k = 0; k < s.size(); ++k) index += s[k] * strides_[k];
    return index;
  }

  StrategyProfile Profile(std::size_t index) const {
    if (index >= num_profiles_) throw InputError("profile index out of range");
    StrategyProfile s(counts_.size());
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      s[k] = static_cast<int>(index / strides_[k]);
      index %= strides_[k];
    }
    return s;
  }

  // Index of the profile equal to `index` except player k plays `strategy`.
  std::size_t WithStrategy(std::size_t index, int player, int strategy) const {
    const int current = static_cast<int>((index / strides_[player]) %
                                         counts_[player]);
    return index + (strategy - current) * static_cast<std::ptrdiff_t>(strides_[player]);
  }

  int StrategyOf(std::size_t index, int player) const {
    return static_cast<int>((index / strides_[player]) % counts_[player]);
  }

  bool operator==(const GameShape& other) const { return counts_ == other.counts_; }

  std::string ToString() const {
    std::ostringstream out;
    out << "(";
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      out << (k ? "," : "") << counts_[k];
    }
    out << ")";
    return out.str();
  }

 private:
  std::vector<int> counts_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 0;
};

struct Deviation {
  int player;
  StrategyProfile profile;
  std::size_t index;
};

// All profiles that differ from `s` in exactly one player's strategy, ordered
// by player then by strategy. Always num_deviations() entries.
inline std::vector<Deviation> ProfileNeighbors(const GameShape& shape,
                                               const StrategyProfile& s) {
  if (!shape.IsValid(s)) throw InputError("invalid strategy profile for shape");
  std::vector<Deviation> out;
  out.reserve(shape.num_deviations());
  const std::size_t base = shape.Index(s);
  for (int k = 0; k < shape.num_players(); ++k) {
    for (int t = 0; t < shape.num_strategies(k); ++t) {
      if (t == s[k]) continue;
      StrategyProfile sigma = s;
      sigma[k] = t;
      out.push_back({k, std::move(sigma), shape.WithStrategy(base, k, t)});
    }
  }
  return out;
}

// Expected payoffs M^k(s) for every player k and profile s, stored densely
// per player in flat-index order. All entries are finite and bounded by
// m_max in absolute value.
class PayoffTensor {
 public:
  PayoffTensor() = default;

  // A non-positive m_max is replaced by the largest absolute entry (or 1 for
  // an all-zero table).
  PayoffTensor(GameShape shape, std::vector<std::vector<double>> payoffs,
               double m_max = 0.0)
      : shape_(std::move(shape)), payoffs_(std::move(payoffs)), m_max_(m_max) {
    MAE_REQUIRE(static_cast<int>(payoffs_.size()) == shape_.num_players(),
                "need one payoff tensor per player");
    double largest = 0.0;
    for (const auto& table : payoffs_) {
      MAE_REQUIRE(table.size() == shape_.num_profiles(),
                  "payoff tensor size does not match the game shape");
      for (double v : table) {
        MAE_REQUIRE(std::isfinite(v), "payoff entries must be finite");
        largest = std::max(largest, std::abs(v));
      }
    }
    if (m_max_ <= 0.0) m_max_ = largest > 0.0 ? largest : 1.0;
    MAE_REQUIRE(largest <= m_max_, "payoff entry exceeds m_max");
  }

  // Two-player table from row-major player matrices (rows: player 1).
  static PayoffTensor TwoPlayer(const std::vector<std::vector<double>>& p1,
                                const std::vector<std::vector<double>>& p2,
                                double m_max = 0.0) {
    MAE_REQUIRE(!p1.empty() && !p1[0].empty(), "empty payoff matrix");
    const int rows = static_cast<int>(p1.size());
    const int cols = static_cast<int>(p1[0].size());
    MAE_REQUIRE(static_cast<int>(p2.size()) == rows, "payoff matrices differ in shape");
    std::vector<std::vector<double>> flat(2);
    for (int i = 0; i < rows; ++i) {
      MAE_REQUIRE(static_cast<int>(p1[i].size()) == cols &&
                      static_cast<int>(p2[i].size()) == cols,
                  "payoff matrices differ in shape");
      for (int j = 0; j < cols; ++j) {
        flat[0].push_back(p1[i][j]);
        flat[1].push_back(p2[i][j]);
      }
    }
    return PayoffTensor(GameShape({rows, cols}), std::move(flat), m_max);
  }

  const GameShape& shape() const { return shape_; }
  int num_players() const { return shape_.num_players(); }
  double m_max() const { return m_max_; }

  double operator()(int player, std::size_t index) const {
    return payoffs_[player][index];
  }
  double operator()(int player, const StrategyProfile& s) const {
    return payoffs_[player][shape_.Index(s)];
  }
  const std::vector<double>& player_payoffs(int player) const {
    return payoffs_.at(player);
  }
  const std::vector<std::vector<double>>& payoffs() const { return payoffs_; }

  bool operator==(const PayoffTensor& other) const {
    return shape_ == other.shape_ && payoffs_ == other.payoffs_ &&
           m_max_ == other.m_max_;
  }

 private:
  GameShape shape_;
  std::vector<std::vector<double>> payoffs_;
  double m_max_ = 1.0;
};

// Running sample means M̂^k(s) with per-profile counts N_s. Means of
// unsampled profiles are undefined and reading them is an error.
class EmpiricalPayoffs {
 public:
  EmpiricalPayoffs() = default;
  explicit EmpiricalPayoffs(GameShape shape)
      : shape_(std::move(shape)),
        means_(shape_.num_players(), std::vector<double>(shape_.num_profiles(), 0.0)),
        counts_(shape_.num_profiles(), 0) {}

  const GameShape& shape() const { return shape_; }

  void Add(std::size_t index, const std::vector<double>& outcome) {
    const double n = static_cast<double>(++counts_[index]);
    for (int k = 0; k < shape_.num_players(); ++k) {
      means_[k][index] += (outcome[k] - means_[k][index]) / n;
    }
  }

  // Adds a single player's observation without touching the others. Used
  // when symmetry supplies a permuted observation of one profile. Callers
  // must bump the count through Add or AddCount exactly once per sample.
  void AddCount(std::size_t index) { ++counts_[index]; }
  void SetMean(int player, std::size_t index, double value) {
    means_[player][index] = value;
  }

  std::uint64_t count(std::size_t index) const { return counts_[index]; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  std::uint64_t total_count() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }

  bool defined(std::size_t index) const { return counts_[index] > 0; }

  double mean(int player, std::size_t index) const {
    if (counts_[index] == 0) {
      throw ContractViolation("empirical mean read for an unsampled profile");
    }
    return means_[player][index];
  }

  // Snapshot as a payoff table; unsampled profiles take `fill`.
  PayoffTensor ToPayoffTensor(double fill, double m_max) const {
    std::vector<std::vector<double>> table = means_;
    for (auto& player : table) {
      for (std::size_t i = 0; i < player.size(); ++i) {
        if (counts_[i] == 0) player[i] = fill;
      }
    }
    return PayoffTensor(shape_, std::move(table), m_max);
  }

 private:
  GameShape shape_;
  std::vector<std::vector<double>> means_;
  std::vector<std::uint64_t> counts_;
};

struct OutcomeRange {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
};

// Noisy match oracle. Implementations keep no mutable state beyond the
// caller's random stream, so a fixed stream yields a fixed outcome sequence.
class OutcomeSimulator {
 public:
  virtual ~OutcomeSimulator() = default;
  virtual const GameShape& shape() const = 0;
  virtual std::vector<double> Sample(std::size_t profile_index,
                                     Rng& rng) const = 0;
  virtual OutcomeRange range(int player) const = 0;
  // True when every outcome lies in {range.lo, range.hi}, which licenses
  // Clopper-Pearson intervals on the rescaled outcome.
  virtual bool binary_outcomes() const { return false; }
};

namespace internal {

inline bool IsWinLossProfile(const PayoffTensor& game, std::size_t index) {
  double total = 0.0;
  for (int k = 0; k < game.num_players(); ++k) total += game(k, index);
  return std::abs(total - 1.0) <= 1e-12;
}

// Bernoulli draw against a table already in [0, 1]. Profiles whose payoffs
// sum to one are treated as win-loss: exactly one player wins, drawn from
// the categorical distribution M(s). Other profiles draw each player
// independently.
inline std::vector<double> DrawBernoulli(const PayoffTensor& unit_game,
                                         std::size_t index, Rng& rng) {
  const int num_players = unit_game.num_players();
  std::vector<double> outcome(num_players, 0.0);
  if (IsWinLossProfile(unit_game, index)) {
    const double u = rng.Uniform();
    double cumulative = 0.0;
    int winner = num_players - 1;
    for (int k = 0; k < num_players; ++k) {
      cumulative += unit_game(k, index);
      if (u < cumulative) {
        winner = k;
        break;
      }
    }
    outcome[winner] = 1.0;
  } else {
    for (int k = 0; k < num_players; ++k) {
      outcome[k] = rng.Bernoulli(unit_game(k, index)) ? 1.0 : 0.0;
    }
  }
  return outcome;
}

inline void RequireUnitInterval(const PayoffTensor& game) {
  for (int k = 0; k < game.num_players(); ++k) {
    for (double v : game.player_payoffs(k)) {
      MAE_REQUIRE(v >= 0.0 && v <= 1.0,
                  "Bernoulli simulation needs payoffs in [0, 1]");
    }
  }
}

}  // namespace internal

// One 0/1 outcome per player with expectation M^k(s).
inline std::vector<double> SimulateBernoulli(const PayoffTensor& game,
                                             const StrategyProfile& s,
                                             Rng& rng) {
  internal::RequireUnitInterval(game);
  return internal::DrawBernoulli(game, game.shape().Index(s), rng);
}

// Simulates any bounded table through Bernoulli draws. Tables outside [0, 1]
// are mapped by x -> (x + M_max) / (2 M_max) before drawing and outcomes are
// mapped back to {-M_max, +M_max}, so empirical means estimate M directly.
class BernoulliSimulator final : public OutcomeSimulator {
 public:
  explicit BernoulliSimulator(PayoffTensor game) : game_(std::move(game)) {
    bool unit = true;
    for (int k = 0; k < game_.num_players() && unit; ++k) {
      for (double v : game_.player_payoffs(k)) {
        if (v < 0.0 || v > 1.0) {
          unit = false;
          break;
        }
      }
    }
    if (unit) {
      scale_ = 1.0;
      offset_ = 0.0;
      unit_game_ = game_;
    } else {
      scale_ = 2.0 * game_.m_max();
      offset_ = -game_.m_max();
      std::vector<std::vector<double>> rescaled = game_.payoffs();
      for (auto& player : rescaled) {
        for (double& v : player) v = (v - offset_) / scale_;
      }
      unit_game_ = PayoffTensor(game_.shape(), std::move(rescaled), 1.0);
    }
  }

  const GameShape& shape() const override { return game_.shape(); }
  const PayoffTensor& game() const { return game_; }

  std::vector<double> Sample(std::size_t index, Rng& rng) const override {
    std::vector<double> outcome = internal::DrawBernoulli(unit_game_, index, rng);
    for (double& v : outcome) v = offset_ + scale_ * v;
    return outcome;
  }

  OutcomeRange range(int) const override { return {offset_, offset_ + scale_}; }
  bool binary_outcomes() const override { return true; }

  // The affine map from unit-interval draws back to payoff units.
  double scale() const { return scale_; }
  double offset() const { return offset_; }

 private:
  PayoffTensor game_;
  PayoffTensor unit_game_;
  double scale_ = 1.0;
  double offset_ = 0.0;
};

struct BernoulliGameOptions {
  // Off-diagonal entries satisfy |M - 0.5| >= gap.
  double gap = 0.1;
  // Optional extra margin: any two payoffs a deviating player compares
  // differ by at least this much. Zero disables the check.
  double min_pair_gap = 0.0;
  int max_attempts = 10000;
};

// Random symmetric two-player win-loss game on n strategies: M^1(i, j) is
// drawn uniformly from [0, 1] by rejection until it satisfies the options,
// M^1(j, i) = 1 - M^1(i, j), M^2 = 1 - M^1 and the diagonal is 0.5.
inline PayoffTensor GenerateBernoulliGame(int n, const BernoulliGameOptions& options,
                                          Rng& rng) {
  MAE_REQUIRE(n >= 2, "Bernoulli games need at least two strategies");
  MAE_REQUIRE(options.gap >= 0.0 && options.gap < 0.5, "gap must lie in [0, 0.5)");
  MAE_REQUIRE(options.min_pair_gap >= 0.0, "min_pair_gap must be nonnegative");
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.5));

  // Entry (i, j) conflicts with entries sharing its column (player 1
  // deviations) or its row (player 2 deviations, via M^2 = 1 - M^1).
  auto fits = [&](int i, int j, double x) {
    if (std::abs(x - 0.5) < options.gap) return false;
    if (options.min_pair_gap <= 0.0) return true;
    // Filled entries are those in (row, col) with row < col visited in
    // order, plus their mirrors; unfilled entries hold NaN.
    auto clash = [&](double y) {
      return !std::isnan(y) && std::abs(x - y) < options.min_pair_gap;
    };
    for (int r = 0; r < n; ++r) {
      if (r != i && clash(m[r][j])) return false;
    }
    for (int c = 0; c < n; ++c) {
      if (c != j && clash(m[i][c])) return false;
    }
    // The mirror entry 1 - x lands at (j, i).
    const double mirror = 1.0 - x;
    for (int r = 0; r < n; ++r) {
      if (r != j && !std::isnan(m[r][i]) &&
          std::abs(mirror - m[r][i]) < options.min_pair_gap) {
        return false;
      }
    }
    for (int c = 0; c < n; ++c) {
      if (c != i && !std::isnan(m[j][c]) &&
          std::abs(mirror - m[j][c]) < options.min_pair_gap) {
        return false;
      }
    }
    return true;
  };

  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m[i][j] = (i == j) ? 0.5 : std::nan("");
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) {
        bool placed = false;
        for (int draw = 0; draw < 1000; ++draw) {
          const double x = rng.Uniform();
          if (fits(i, j, x)) {
            m[i][j] = x;
            m[j][i] = 1.0 - x;
            placed = true;
            break;
          }
        }
        ok = placed;
      }
    }
    if (!ok) continue;
    std::vector<std::vector<double>> m2(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m2[i][j] = 1.0 - m[i][j];
    }
    return PayoffTensor::TwoPlayer(m, m2, 1.0);
  }
  throw InputError("could not satisfy the Bernoulli game gap constraints");
}

// Symmetry under player relabeling: with s'_j = s_{p(j)}, player j of s'
// plays what player p(j) played in s, so M^j(s') = M^{p(j)}(s) for every
// permutation p. Heterogeneous strategy counts are never symmetric.
inline bool IsSymmetric(const PayoffTensor& game, std::string* diagnostic = nullptr,
                        double tolerance = 1e-12) {
  const GameShape& shape = game.shape();
  const int num_players = shape.num_players();
  for (int k = 1; k < num_players; ++k) {
    if (shape.num_strategies(k) != shape.num_strategies(0)) {
      if (diagnostic) *diagnostic = "players have different strategy counts";
      return false;
    }
  }
  std::vector<int> perm(num_players);
  std::iota(perm.begin(), perm.end(), 0);
  StrategyProfile permuted(num_players);
  do {
    for (std::size_t idx = 0; idx < shape.num_profiles(); ++idx) {
      const StrategyProfile s = shape.Profile(idx);
      for (int j = 0; j < num_players; ++j) permuted[j] = s[perm[j]];
      const std::size_t pidx = shape.Index(permuted);
      for (int j = 0; j < num_players; ++j) {
        if (std::abs(game(j, pidx) - game(perm[j], idx)) > tolerance) {
          if (diagnostic) {
            std::ostringstream out;
            out << "payoff of player " << perm[j] << " at profile " << idx
                << " differs from player " << j << " at profile " << pidx;
            *diagnostic = out.str();
          }
          return false;
        }
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

// Smallest |M^k(s) - M^k(sigma)| over all single-deviation pairs; infinity
// when the game has no deviations.
inline double MinimumPayoffGap(const PayoffTensor& game) {
  const GameShape& shape = game.shape();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < shape.num_profiles(); ++a) {
    for (int k = 0; k < shape.num_players(); ++k) {
      const int own = shape.StrategyOf(a, k);
      for (int t = own + 1; t < shape.num_strategies(k); ++t) {
        const std::size_t b = shape.WithStrategy(a, k, t);
        gap = std::min(gap, std::abs(game(k, a) - game(k, b)));
      }
    }
  }
  return gap;
}

}  // namespace mae

#endif  // MAE_GAME_HPP_
