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

// Experiment drivers: seeded trial streams, a parallel trial loop, and the
// sweeps behind the command-line tool. Trial t of master seed s always uses
// the streams derived from (s, t), so results do not depend on scheduling.

#ifndef MAE_EXPERIMENTS_HPP_
#define MAE_EXPERIMENTS_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mae/alpharank.hpp"
#include "mae/errors.hpp"
#include "mae/game.hpp"
#include "mae/game_io.hpp"
#include "mae/metrics.hpp"
#include "mae/rgucb.hpp"
#include "mae/rng.hpp"

namespace mae {

// Stream for the game drawn in a trial and for the trial's sampling.
inline Rng TrialGameRng(std::uint64_t seed, std::uint64_t trial) {
  return Rng(seed, 2 * trial);
}
inline Rng TrialSampleRng(std::uint64_t seed, std::uint64_t trial) {
  return Rng(seed, 2 * trial + 1);
}

// Runs fn(i) for i in [0, n) on up to `workers` threads (0: hardware
// concurrency). The first exception thrown is rethrown after all join.
template <typename Fn>
void ParallelFor(std::size_t n, Fn&& fn, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

template <typename T>
double Median(std::vector<T> values) {
  MAE_REQUIRE(!values.empty(), "median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? static_cast<double>(values[mid])
                           : 0.5 * (static_cast<double>(values[mid - 1]) +
                                    static_cast<double>(values[mid]));
}

// Observes every profile `per_profile` times.
inline EmpiricalPayoffs SampleUniformly(const OutcomeSimulator& sim, std::uint64_t per_profile,
                                        Rng& rng) {
  EmpiricalPayoffs out(sim.shape());
  for (std::size_t s = 0; s < sim.shape().num_profiles(); ++s) {
    for (std::uint64_t i = 0; i < per_profile; ++i) out.Add(s, sim.Sample(s, rng));
  }
  return out;
}

// Empirical table after the first `steps` records of a plain (non-symmetric)
// run's history.
inline EmpiricalPayoffs ReplayHistory(const GameShape& shape,
                                      const std::vector<HistoryRecord>& history,
                                      std::size_t steps) {
  EmpiricalPayoffs out(shape);
  for (std::size_t i = 0; i < std::min(steps, history.size()); ++i) {
    out.Add(history[i].profile, history[i].outcome);
  }
  return out;
}

struct SweepCell {
  SamplingScheme scheme;
  StoppingCriterion criterion;
  double delta = 0.0;
  std::size_t trial = 0;
  std::uint64_t samples = 0;
  std::size_t edge_errors = 0;
  bool truncated = false;
};

struct SweepConfig {
  std::vector<SamplingScheme> schemes{SamplingScheme::kUniformExhaustive};
  std::vector<StoppingCriterion> criteria{StoppingCriterion::kUcb};
  std::vector<double> deltas{0.1};
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  std::uint64_t budget = 100000;
  unsigned workers = 0;
};

// Every (scheme, criterion, delta, trial) cell. The game for trial t comes
// from game_for_trial(t); all cells of one trial share its sampling stream.
inline std::vector<SweepCell> RunRgucbSweep(
    const SweepConfig& config, const std::function<PayoffTensor(std::size_t)>& game_for_trial) {
  std::vector<PayoffTensor> games;
  for (std::size_t t = 0; t < config.trials; ++t) games.push_back(game_for_trial(t));
  std::vector<SweepCell> cells;
  for (auto scheme : config.schemes) {
    for (auto criterion : config.criteria) {
      for (double delta : config.deltas) {
        for (std::size_t t = 0; t < config.trials; ++t) {
          SweepCell c;
          c.scheme = scheme;
          c.criterion = criterion;
          c.delta = delta;
          c.trial = t;
          cells.push_back(c);
        }
      }
    }
  }
  ParallelFor(
      cells.size(),
      [&](std::size_t i) {
        SweepCell& c = cells[i];
        const PayoffTensor& game = games[c.trial];
        BernoulliSimulator sim(game);
        RgUcbOptions options;
        options.delta = c.delta;
        options.scheme = c.scheme;
        options.criterion = c.criterion;
        options.budget = config.budget;
        options.record_history = false;
        Rng rng = TrialSampleRng(config.seed, c.trial);
        const RgUcbResult run = RunResponseGraphUcb(sim, options, rng);
        c.samples = run.total_samples;
        c.truncated = run.truncated;
        c.edge_errors = EdgeErrors(run.graph, BuildResponseGraph(game));
      },
      config.workers);
  return cells;
}

inline std::string SweepCsv(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "scheme,criterion,delta,trial,samples,edge_errors,truncated\n";
  for (const auto& c : cells) {
    out << ToString(c.scheme) << ',' << ToString(c.criterion) << ',' << FormatDouble(c.delta)
        << ',' << c.trial << ',' << c.samples << ',' << c.edge_errors << ','
        << (c.truncated ? 1 : 0) << '\n';
  }
  return out.str();
}

// Per (scheme, criterion, delta): median samples and mean edge errors.
inline std::string SweepSummaryCsv(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "scheme,criterion,delta,trials,median_samples,mean_edge_errors,truncated_runs\n";
  std::vector<bool> done(cells.size(), false);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::uint64_t> samples;
    double errors = 0.0;
    std::size_t truncated = 0;
    for (std::size_t j = i; j < cells.size(); ++j) {
      if (cells[j].scheme != cells[i].scheme || cells[j].criterion != cells[i].criterion ||
          cells[j].delta != cells[i].delta) {
        continue;
      }
      done[j] = true;
      samples.push_back(cells[j].samples);
      errors += static_cast<double>(cells[j].edge_errors);
      truncated += cells[j].truncated ? 1 : 0;
    }
    out << ToString(cells[i].scheme) << ',' << ToString(cells[i].criterion) << ','
        << FormatDouble(cells[i].delta) << ',' << samples.size() << ','
        << FormatDouble(Median(samples)) << ','
        << FormatDouble(errors / static_cast<double>(samples.size())) << ',' << truncated
        << '\n';
  }
  return out.str();
}

struct RankErrorPoint {
  // Samples so far divided by the run's total.
  double fraction = 0.0;
  std::uint64_t samples = 0;
  double frobenius = 0.0;
  double kendall = 0.0;
};

// Payoff-table and ranking error along a sampling trajectory, at
// `checkpoints` evenly spaced sample counts. Unsampled profiles take the
// midpoint of the outcome range.
inline std::vector<RankErrorPoint> RankErrorTrajectory(const PayoffTensor& truth,
                                                       const RgUcbResult& run,
                                                       const AlphaRankParams& params,
                                                       std::size_t checkpoints,
                                                       double fill = 0.5) {
  MAE_REQUIRE(checkpoints >= 1, "need at least one checkpoint");
  MAE_REQUIRE(!run.history.empty(), "run has no recorded history");
  const PartialRanking reference = RankingFromDistribution(AlphaRank(truth, params));
  std::vector<RankErrorPoint> out;
  const std::size_t total = run.history.size();
  for (std::size_t c = 1; c <= checkpoints; ++c) {
    const std::size_t steps = std::max<std::size_t>(1, total * c / checkpoints);
    const PayoffTensor estimate =
        ReplayHistory(truth.shape(), run.history, steps).ToPayoffTensor(fill, truth.m_max());
    RankErrorPoint p;
    p.samples = steps;
    p.fraction = static_cast<double>(steps) / static_cast<double>(total);
    p.frobenius = FrobeniusError(estimate, truth);
    p.kendall = KendallPartial(reference, RankingFromDistribution(AlphaRank(estimate, params)));
    out.push_back(p);
  }
  return out;
}

}  // namespace mae

#endif  // MAE_EXPERIMENTS_HPP_
