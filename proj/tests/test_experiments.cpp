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

#include <atomic>
#include <stdexcept>

#include "mae/experiments.hpp"
#include "test_games.hpp"

namespace mae {
namespace {

using testing::SoleSinkGame;

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  ParallelFor(hits.size(), [&](std::size_t i) { ++hits[i]; }, 8);
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelForTest, RethrowsAfterJoin) {
  std::atomic<int> done{0};
  EXPECT_THROW(ParallelFor(
                   100,
                   [&](std::size_t i) {
                     ++done;
                     if (i == 37) throw std::runtime_error("boom");
                   },
                   4),
               std::runtime_error);
  EXPECT_EQ(done.load(), 100);
}

TEST(ParallelForTest, ResultsIndependentOfWorkerCount) {
  auto run = [](unsigned workers) {
    std::vector<double> out(64);
    ParallelFor(out.size(), [&](std::size_t t) { out[t] = TrialSampleRng(5, t).Uniform(); },
                workers);
    return out;
  };
  EXPECT_EQ(run(1), run(7));
}

TEST(TrialRngTest, StreamsDiffer) {
  EXPECT_NE(TrialGameRng(1, 0)(), TrialSampleRng(1, 0)());
  EXPECT_NE(TrialSampleRng(1, 0)(), TrialSampleRng(1, 1)());
  EXPECT_EQ(TrialSampleRng(9, 3)(), TrialSampleRng(9, 3)());
}

TEST(MedianTest, OddEvenAndEmpty) {
  EXPECT_DOUBLE_EQ(Median(std::vector<int>{3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(Median(std::vector<int>{4, 1, 3, 2}), 2.5);
  EXPECT_THROW(Median(std::vector<int>{}), InputError);
}

TEST(SampleUniformlyTest, CountsAndConvergence) {
  const PayoffTensor g = SoleSinkGame();
  BernoulliSimulator sim(g);
  Rng rng(3);
  const EmpiricalPayoffs e = SampleUniformly(sim, 20000, rng);
  for (std::size_t s = 0; s < g.shape().num_profiles(); ++s) {
    EXPECT_EQ(e.count(s), 20000u);
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(e.mean(k, s), g(k, s), 0.02);
  }
}

TEST(ReplayHistoryTest, FullReplayMatchesFinalTable) {
  const PayoffTensor g = SoleSinkGame();
  BernoulliSimulator sim(g);
  Rng rng(11);
  const RgUcbResult run = RunResponseGraphUcb(sim, RgUcbOptions{}, rng);
  ASSERT_EQ(run.history.size(), run.total_samples);
  const EmpiricalPayoffs full = ReplayHistory(g.shape(), run.history, run.history.size());
  for (std::size_t s = 0; s < g.shape().num_profiles(); ++s) {
    ASSERT_EQ(full.count(s), run.empirical.count(s));
    if (!full.defined(s)) continue;
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(full.mean(k, s), run.empirical.mean(k, s), 1e-12);
  }
  EXPECT_EQ(ReplayHistory(g.shape(), run.history, 5).total_count(), 5u);
  EXPECT_EQ(ReplayHistory(g.shape(), run.history, 1u << 30).total_count(), run.total_samples);
}

TEST(SweepTest, DeterministicAndWellFormed) {
  SweepConfig config;
  config.schemes = {SamplingScheme::kUniform, SamplingScheme::kUniformExhaustive};
  config.deltas = {0.1, 0.2};
  config.trials = 4;
  config.seed = 2;
  auto game_for = [&](std::size_t t) {
    Rng rng = TrialGameRng(config.seed, t);
    BernoulliGameOptions o;
    o.min_pair_gap = 0.1;
    return GenerateBernoulliGame(3, o, rng);
  };
  config.workers = 1;
  const auto a = RunRgucbSweep(config, game_for);
  config.workers = 6;
  const auto b = RunRgucbSweep(config, game_for);
  ASSERT_EQ(a.size(), 16u);
  EXPECT_EQ(SweepCsv(a), SweepCsv(b));
  const std::string csv = SweepCsv(a);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
  EXPECT_EQ(csv.rfind("scheme,criterion,delta,trial,samples,edge_errors,truncated\n", 0), 0u);
  const std::string summary = SweepSummaryCsv(a);
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 5);
  for (const auto& c : a) EXPECT_GT(c.samples, 0u);
}

TEST(RankErrorTrajectoryTest, EndsAccurate) {
  const PayoffTensor g = SoleSinkGame();
  BernoulliSimulator sim(g);
  Rng rng(4);
  RgUcbOptions options;
  options.delta = 0.01;
  const RgUcbResult run = RunResponseGraphUcb(sim, options, rng);
  const auto traj = RankErrorTrajectory(g, run, AlphaRankParams{}, 10);
  ASSERT_EQ(traj.size(), 10u);
  EXPECT_DOUBLE_EQ(traj.back().fraction, 1.0);
  EXPECT_EQ(traj.back().samples, run.total_samples);
  for (std::size_t i = 1; i < traj.size(); ++i) EXPECT_GE(traj[i].samples, traj[i - 1].samples);
  EXPECT_LT(traj.back().frobenius, traj.front().frobenius);
  EXPECT_DOUBLE_EQ(traj.back().kendall, 0.0);
}

}  // namespace
}  // namespace mae
