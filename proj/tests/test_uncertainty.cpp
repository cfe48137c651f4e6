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


#include <gtest/gtest.h>

#include <cmath>

#include "mae/alpharank.hpp"
#include "mae/experiments.hpp"
#include "mae/uncertainty.hpp"
#include "oracles.hpp"
#include "test_games.hpp"

namespace mae {
namespace {

using testing::RandomBounds;

TEST(ClassifyEdgesTest, SplitsCertainTieAndUncertain) {
  const PayoffTensor lo = PayoffTensor::TwoPlayer({{0.1, 0.2}, {0.5, 0.3}}, {{0, 0}, {0, 0}}, 1.0);
  const PayoffTensor hi = PayoffTensor::TwoPlayer({{0.4, 0.2}, {0.6, 0.3}}, {{0, 0}, {0, 0}}, 1.0);
  const UncertainResponseGraph g = ClassifyEdges({lo, hi});
  // Player 1: column 0 compares [0.1, 0.4] and [0.5, 0.6]: certain upward;
  // column 1 compares degenerate 0.2 and 0.3: certain. Player 2: all ties.
  EXPECT_EQ(g.uncertain.size(), 0u);
  EXPECT_EQ(g.certain.size(), 4u);
  std::size_t ties = 0;
  for (const auto& e : g.certain) ties += e.flag == EdgeFlag::kTie;
  EXPECT_EQ(ties, 2u);

  const PayoffTensor hi2 = PayoffTensor::TwoPlayer({{0.55, 0.2}, {0.6, 0.3}}, {{0, 0}, {0, 0}}, 1.0);
  EXPECT_EQ(ClassifyEdges({lo, hi2}).uncertain.size(), 1u);
  EXPECT_THROW(ClassifyEdges({hi, lo}), InputError);
}

TEST(SspTest, TwoStateTieReturnsInTwoSteps) {
  // One player with two equal strategies: s leaves at eta/m and comes back
  // at eta/m, so the return time is 1 + (eta/m)/(eta/m) = 2.
  const PayoffTensor g(GameShape({2}), {{0.3, 0.3}}, 1.0);
  const auto r = RankingWeightInterval(0, ExactBounds(g));
  EXPECT_NEAR(r.lambda_inf, 2.0, 1e-12);
  EXPECT_NEAR(r.pi_hi, 0.5, 1e-12);
  EXPECT_NEAR(r.pi_lo, 0.5, 1e-12);
  EXPECT_FALSE(r.excludable);
}

TEST(SspTest, TransientStatesGetZeroAndTiedSinksSplit) {
  // Strategies 0 and 1 tie at the top; 2 moves to either at rate eta. The
  // sink {0, 1} has exit and return rate eta/m, so lambda = 1 + 1 = 2.
  const int m = 10;
  const PayoffTensor g(GameShape({3}), {{0.9, 0.9, 0.1}}, 1.0);
  UncertaintyParams params;
  params.m = m;
  const auto r = AllRankingIntervals(ExactBounds(g), params);
  EXPECT_NEAR(r[0].lambda_inf, 2.0, 1e-12);
  EXPECT_NEAR(r[1].pi_hi, 0.5, 1e-12);
  EXPECT_EQ(r[2].pi_hi, 0.0);
  EXPECT_TRUE(r[2].excludable);
  const PayoffTensor sink = testing::WinLoss({{0.5, 0.9}, {0.1, 0.5}});
  const auto c = AllRankingIntervals(ExactBounds(sink));
  EXPECT_NEAR(c[0].pi_hi, 1.0, 1e-12);
  EXPECT_NEAR(c[1].pi_hi, 0.0, 1e-12);
}

TEST(SspTest, FourCycleIsUniform) {
  const PayoffTensor pennies =
      PayoffTensor::TwoPlayer({{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}, 1.0);
  for (const auto& r : AllRankingIntervals(ExactBounds(pennies))) {
    EXPECT_NEAR(r.lambda_inf, 4.0, 1e-12);
    EXPECT_NEAR(r.lambda_sup, 4.0, 1e-12);
  }
}

TEST(SspTest, MatchesExhaustiveEnumeration) {
  Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const PayoffBounds b = RandomBounds(rng, 1, 8);
    const UncertainResponseGraph g = ClassifyEdges(b);
    for (std::size_t s = 0; s < g.num_nodes; ++s) {
      const auto ssp = RankingWeightInterval(s, g);
      const auto oracle = testing::EnumerateOrientations(s, g, 50);
      EXPECT_NEAR(ssp.pi_hi, oracle.pi_hi, 1e-9) << trial << ' ' << s;
      EXPECT_NEAR(ssp.pi_lo, oracle.pi_lo, 1e-9) << trial << ' ' << s;
      EXPECT_EQ(ssp.excludable, oracle.excludable) << trial << ' ' << s;
      ++checked;
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(SspTest, ExcludabilityMatchesEnumerationOnDenseUncertainty) {
  Rng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const UncertainResponseGraph g = ClassifyEdges(RandomBounds(rng, 6, 10));
    for (std::size_t s = 0; s < g.num_nodes; ++s) {
      EXPECT_EQ(MccMembershipExcludable(s, g), testing::EnumerateOrientations(s, g, 50).excludable);
    }
  }
}

TEST(SspTest, MaximizingOnExcludableStateIsContractViolation) {
  const PayoffTensor lo = testing::WinLoss({{0.5, 0.1}, {0.1, 0.5}});
  const PayoffTensor hi = testing::WinLoss({{0.5, 0.9}, {0.9, 0.5}});
  // Player-two payoffs of WinLoss(lo) exceed those of WinLoss(hi); rebuild
  // bounds entrywise.
  auto l = lo.payoffs(), u = hi.payoffs();
  for (int k = 0; k < 2; ++k) {
    for (std::size_t s = 0; s < 4; ++s) {
      const double a = l[k][s], c = u[k][s];
      l[k][s] = std::min(a, c);
      u[k][s] = std::max(a, c);
    }
  }
  const UncertainResponseGraph g = ClassifyEdges({PayoffTensor(GameShape({2, 2}), l, 1.0),
                                                  PayoffTensor(GameShape({2, 2}), u, 1.0)});
  ASSERT_TRUE(MccMembershipExcludable(0, g));
  EXPECT_THROW(SspExtremalReturnTime(0, g, 50, SspObjective::kMaximize), ContractViolation);
  EXPECT_EQ(RankingWeightInterval(0, g).pi_lo, 0.0);
}

TEST(IntervalTest, ZeroWidthMatchesPerturbedAlphaRank) {
  Rng rng(33);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const PayoffTensor g = testing::RandomGame(GameShape({3, 3}), rng);
    if (FindMccs(BuildResponseGraph(g)).size() != 1) continue;
    AlphaRankParams params;
    params.infinite_alpha = true;
    params.sweep_perturbation = false;
    params.perturbation = 1e-12;
    const auto pi = AlphaRank(g, params).pi;
    const auto intervals = AllRankingIntervals(ExactBounds(g));
    for (std::size_t s = 0; s < pi.size(); ++s) {
      EXPECT_NEAR(intervals[s].pi_lo, intervals[s].pi_hi, 1e-12);
      EXPECT_NEAR(intervals[s].pi_hi, pi[s], 1e-8);
    }
    ++compared;
  }
  EXPECT_GT(compared, 10);
}

TEST(IntervalTest, VacuousBoundsSpanEverything) {
  const GameShape shape({2, 3});
  const PayoffBounds b{PayoffTensor(shape, {std::vector<double>(6, 0.0), std::vector<double>(6, 0.0)}, 1.0),
                       PayoffTensor(shape, {std::vector<double>(6, 1.0), std::vector<double>(6, 1.0)}, 1.0)};
  for (const auto& r : AllRankingIntervals(b)) {
    EXPECT_EQ(r.pi_lo, 0.0);
    EXPECT_NEAR(r.pi_hi, 1.0, 1e-12);
    EXPECT_TRUE(r.excludable);
  }
}

TEST(IntervalTest, WideningNestsIntervals) {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const PayoffTensor g = testing::RandomGame(GameShape({2, 3}), rng);
    std::vector<RankingInterval> previous;
    for (double w : {0.0, 0.02, 0.05, 0.1, 0.2, 0.5}) {
      const auto current = AllRankingIntervals(WidenedBounds(g, w));
      if (!previous.empty()) {
        for (std::size_t s = 0; s < current.size(); ++s) {
          EXPECT_LE(current[s].pi_lo, previous[s].pi_lo + 1e-12);
          EXPECT_GE(current[s].pi_hi, previous[s].pi_hi - 1e-12);
        }
      }
      previous = current;
    }
  }
}

TEST(IntervalTest, GamesInsideBoundsHaveWeightsInsideIntervals) {
  Rng rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const PayoffBounds b = RandomBounds(rng, 1, 8);
    const auto intervals = AllRankingIntervals(b);
    for (int draw = 0; draw < 10; ++draw) {
      auto p = b.lower.payoffs();
      for (int k = 0; k < b.shape().num_players(); ++k) {
        for (std::size_t s = 0; s < b.shape().num_profiles(); ++s) {
          p[k][s] += rng.Uniform() * (b.upper(k, s) - b.lower(k, s));
        }
      }
      const PayoffTensor inside(b.shape(), p, 1.0);
      ASSERT_TRUE(b.Contains(inside));
      const auto w = SinkConditionalWeights(inside);
      for (std::size_t s = 0; s < w.size(); ++s) {
        EXPECT_GE(w[s], intervals[s].pi_lo - 1e-12);
        EXPECT_LE(w[s], intervals[s].pi_hi + 1e-12);
      }
    }
  }
}

TEST(IntervalTest, SinglePopulationRockPaperScissors) {
  UncertaintyParams params;
  params.mode = PopulationMode::kSingle;
  for (const auto& r : AllRankingIntervals(ExactBounds(testing::RpsGame()), params)) {
    EXPECT_NEAR(r.pi_lo, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.pi_hi, 1.0 / 3.0, 1e-12);
  }
}

TEST(EmpiricalBoundsTest, CoverTheTrueGameWithHighProbability) {
  Rng game_rng(36);
  BernoulliGameOptions gen;
  const PayoffTensor g = GenerateBernoulliGame(3, gen, game_rng);
  const BernoulliSimulator sim(g);
  int covered = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + t);
    const PayoffBounds b =
        EmpiricalBounds(SampleUniformly(sim, 30, rng), 0.1, ConfidenceMethod::kHoeffding);
    covered += b.Contains(g);
  }
  EXPECT_GE(covered, 180);
  EmpiricalPayoffs none(g.shape());
  const PayoffBounds vacuous = EmpiricalBounds(none, 0.1, ConfidenceMethod::kClopperPearson);
  EXPECT_EQ(vacuous.lower(0, 0), 0.0);
  EXPECT_EQ(vacuous.upper(1, 8), 1.0);
}

TEST(IntervalCsvTest, Format) {
  const auto intervals = AllRankingIntervals(ExactBounds(testing::SoleSinkGame()));
  const std::string csv =
      RankingIntervalsCsv(intervals, testing::SoleSinkGame().shape(), PopulationMode::kMulti, 0.05);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "state,pi_lo,pi_hi,payoff_uncertainty_level");
  EXPECT_NE(csv.find("\"0 0\",1,1,0.05"), std::string::npos) << csv;
}

}  // namespace
}  // namespace mae
