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

#ifndef MAE_METRICS_HPP_
#define MAE_METRICS_HPP_

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "mae/alpharank.hpp"
#include "mae/errors.hpp"
#include "mae/game.hpp"
#include "mae/game_io.hpp"
#include "mae/response_graph.hpp"

namespace mae {

// Ordered buckets of item ids, best first; items in a bucket are tied.
struct PartialRanking {
  std::vector<std::vector<std::size_t>> buckets;

  std::size_t num_items() const {
    std::size_t n = 0;
    for (const auto& b : buckets) n += b.size();
    return n;
  }

  // Bucket position of every item; throws unless the buckets are nonempty,
  // disjoint and cover 0..n-1.
  std::vector<std::size_t> BucketOf() const {
    const std::size_t n = num_items();
    std::vector<std::size_t> pos(n, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < buckets.size(); ++i) {
      MAE_REQUIRE(!buckets[i].empty(), "ranking bucket is empty");
      for (std::size_t item : buckets[i]) {
        MAE_REQUIRE(item < n && pos[item] == static_cast<std::size_t>(-1),
                    "ranking items must be distinct ids 0..n-1");
        pos[item] = i;
      }
    }
    return pos;
  }
};

// Kendall distance between partial rankings with penalty p: over unordered
// item pairs, 0 if ordered alike or tied in both, 1 if ordered oppositely,
// p if tied in exactly one.
inline double KendallPartial(const PartialRanking& r, const PartialRanking& r_hat,
                             double p = 0.5) {
  MAE_REQUIRE(p >= 0.0 && p <= 1.0, "penalty p must lie in [0, 1]");
  const auto a = r.BucketOf();
  const auto b = r_hat.BucketOf();
  MAE_REQUIRE(a.size() == b.size(), "rankings cover different item sets");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool tie_a = a[i] == a[j];
      const bool tie_b = b[i] == b[j];
      if (tie_a && tie_b) continue;
      if (tie_a != tie_b) {
        total += p;
      } else if ((a[i] < a[j]) != (b[i] < b[j])) {
        total += 1.0;
      }
    }
  }
  return total;
}

inline PartialRanking RankingFromDistribution(const std::vector<double>& pi,
                                              double tie_tol = 1e-8) {
  return {OrderByMass(pi, tie_tol)};
}

inline PartialRanking RankingFromDistribution(const RankingDistribution& ranking,
                                              double tie_tol = 1e-8) {
  return RankingFromDistribution(ranking.pi, tie_tol);
}

// Number of comparable pairs whose orientation differs between two graphs
// over the same pairs. A tie disagrees with any strict orientation.
inline std::size_t EdgeErrors(const ResponseGraph& estimated, const ResponseGraph& truth) {
  MAE_REQUIRE(estimated.num_nodes() == truth.num_nodes(), "graphs have different node sets");
  MAE_REQUIRE(estimated.edges().size() == truth.edges().size(),
              "graphs have different edge sets");
  const auto est = estimated.ByPair();
  std::size_t errors = 0;
  for (const auto& t : truth.edges()) {
    const auto it = est.find(t.key());
    MAE_REQUIRE(it != est.end(), "graphs have different edge sets");
    const ResponseEdge& e = it->second;
    const bool t_tie = t.flag == EdgeFlag::kTie;
    const bool e_tie = e.flag == EdgeFlag::kTie;
    if (t_tie || e_tie) {
      errors += t_tie != e_tie ? 1 : 0;
    } else if (e.from != t.from) {
      ++errors;
    }
  }
  return errors;
}

// |M^k(s) - M^k(sigma)| for every single-deviation pair, in pair order.
inline std::vector<double> GapDistribution(const PayoffTensor& game) {
  std::vector<double> out;
  ForEachDeviationPair(game.shape(), [&](std::size_t a, std::size_t b, int k) {
    out.push_back(std::abs(game(k, a) - game(k, b)));
  });
  return out;
}

inline std::string GapsCsv(const PayoffTensor& game) {
  std::ostringstream out;
  out << "player,profile_a,profile_b,gap\n";
  const GameShape& shape = game.shape();
  auto label = [&](std::size_t s) {
    std::string text;
    for (int v : shape.Profile(s)) text += (text.empty() ? "" : " ") + std::to_string(v);
    return text;
  };
  ForEachDeviationPair(shape, [&](std::size_t a, std::size_t b, int k) {
    out << k << ",\"" << label(a) << "\",\"" << label(b) << "\","
        << FormatDouble(std::abs(game(k, a) - game(k, b))) << '\n';
  });
  return out.str();
}

// Frobenius distance between two tables of the same shape, over all players.
inline double FrobeniusError(const PayoffTensor& a, const PayoffTensor& b) {
  MAE_REQUIRE(a.shape() == b.shape(), "tables have different shapes");
  double total = 0.0;
  for (int k = 0; k < a.shape().num_players(); ++k) {
    for (std::size_t s = 0; s < a.shape().num_profiles(); ++s) {
      const double d = a(k, s) - b(k, s);
      total += d * d;
    }
  }
  return std::sqrt(total);
}

}  // namespace mae

#endif  // MAE_METRICS_HPP_
