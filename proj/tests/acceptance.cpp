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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check draws from fixed seeds, so reruns print the same
// lines.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "mae/alpharank.hpp"
#include "mae/completion.hpp"
#include "mae/confidence.hpp"
#include "mae/elo.hpp"
#include "mae/experiments.hpp"
#include "mae/metrics.hpp"
#include "mae/rgucb.hpp"
#include "mae/sample_complexity.hpp"
#include "mae/uncertainty.hpp"
#include "oracles.hpp"
#include "test_games.hpp"

namespace mae {
namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

BernoulliGameOptions GapOptions(double gap) {
  BernoulliGameOptions o;
  o.gap = gap;
  o.min_pair_gap = gap;
  return o;
}

PayoffTensor GeneratedGame(int n, double gap, std::uint64_t seed, std::size_t trial) {
  Rng rng = TrialGameRng(seed, trial);
  return GenerateBernoulliGame(n, GapOptions(gap), rng);
}

RgUcbResult Solve(const PayoffTensor& game, RgUcbOptions options, Rng rng) {
  BernoulliSimulator sim(game);
  return RunResponseGraphUcb(sim, options, rng);
}

// Transition matrices against a 50-digit scalar oracle.
Verdict FixationOracle() {
  double worst_rel = 0.0, worst_row = 0.0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    Rng rng(1, t);
    const double alpha = std::pow(10.0, -2.0 + 5.0 * rng.Uniform());
    const int m = 2 + static_cast<int>(rng.Below(199));
    const double d = 2.0 * rng.Uniform() - 1.0;
    const GameShape shape({2, 2});
    std::vector<std::vector<double>> p(2, std::vector<double>(4));
    for (auto& row : p) {
      for (double& v : row) v = rng.Uniform();
    }
    p[0][shape.Index({1, 0})] = p[0][shape.Index({0, 0})] + d;
    const PayoffTensor g(shape, p, 2.0);
    AlphaRankParams params;
    params.alpha = alpha;
    params.m = m;
    const Eigen::MatrixXd c = BuildTransitionMatrix(g, params).matrix;
    const Eigen::MatrixXd oracle = testing::OracleMatrix(g, alpha, m);
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      worst_row = std::max(worst_row, std::abs(c.row(i).sum() - 1.0));
      for (Eigen::Index j = 0; j < c.cols(); ++j) {
        const double want = oracle(i, j), got = c(i, j);
        double err;
        if (i == j) {
          err = std::abs(got - want);
        } else if (std::abs(want) < 1e-300) {
          err = std::abs(got - want) > 1e-300 ? 1.0 : 0.0;
        } else {
          err = std::abs(got / want - 1.0);
        }
        worst_rel = std::max(worst_rel, err);
      }
    }
  }
  return {worst_rel <= 1e-12 && worst_row <= 1e-12,
          Fmt("1000 triples, max relative error %.2e, max row-sum error %.2e", worst_rel,
              worst_row)};
}

// 2x2 sole-sink game: plain and symmetric samplers.
Verdict SoleSinkSampling() {
  const PayoffTensor g = testing::SoleSinkGame();
  const GameShape& shape = g.shape();
  const std::vector<std::vector<std::size_t>> sole_sink{{shape.Index({0, 0})}};
  std::vector<RgUcbResult> plain(100), sym(100);
  ParallelFor(100, [&](std::size_t seed) {
    RgUcbOptions options;
    options.delta = 0.1;
    plain[seed] = Solve(g, options, Rng(seed));
    options.exploit_symmetry = true;
    sym[seed] = Solve(g, options, Rng(seed));
  });
  int plain_ok = 0, sym_ok = 0, fewer = 0;
  std::vector<std::uint64_t> plain_samples, sym_samples;
  for (std::size_t i = 0; i < 100; ++i) {
    plain_ok += FindMccs(plain[i].graph) == sole_sink;
    bool only_canonical = !sym[i].truncated;
    for (const auto& rec : sym[i].history) only_canonical &= rec.profile == shape.Index({0, 1});
    sym_ok += only_canonical && FindMccs(sym[i].graph) == sole_sink;
    fewer += sym[i].total_samples < plain[i].total_samples;
    plain_samples.push_back(plain[i].total_samples);
    sym_samples.push_back(sym[i].total_samples);
  }
  const double median = Median(plain_samples);
  return {plain_ok >= 90 && sym_ok >= 90 && fewer >= 90 && median >= 50 && median <= 2000,
          Fmt("plain sole sink %d/100, symmetric via (0,1) only %d/100, symmetric cheaper "
              "%d/100, median samples plain %.0f vs symmetric %.0f",
              plain_ok, sym_ok, fewer, median, Median(sym_samples))};
}

// Strict-criterion correctness on generated 4x4 games.
Verdict GeneratedCorrectness() {
  const std::size_t trials = 200;
  std::vector<int> correct(trials, 0), truncated(trials, 0);
  ParallelFor(trials, [&](std::size_t t) {
    const PayoffTensor g = GeneratedGame(4, 0.1, 3, t);
    RgUcbOptions options;
    options.delta = 0.1;
    const RgUcbResult r = Solve(g, options, TrialSampleRng(3, t));
    correct[t] = EdgeErrors(r.graph, BuildResponseGraph(g)) == 0;
    truncated[t] = r.truncated;
  });
  const int ok = std::accumulate(correct.begin(), correct.end(), 0);
  return {ok >= 180, Fmt("%d/200 fully correct graphs (%d runs hit the budget)", ok,
                         std::accumulate(truncated.begin(), truncated.end(), 0))};
}

// Sample cost against the payoff gap.
Verdict GapScaling() {
  const std::vector<double> gaps{0.05, 0.1, 0.2, 0.4};
  std::vector<double> medians;
  for (double gap : gaps) {
    // 2x2 win-loss game in which every compared pair differs by exactly gap.
    const PayoffTensor g = testing::WinLoss({{0.5, 0.5 + gap}, {0.5 - gap, 0.5}});
    std::vector<std::uint64_t> samples(20);
    ParallelFor(20, [&](std::size_t t) {
      RgUcbOptions options;
      options.delta = 0.1;
      options.budget = 100000000;
      options.record_history = false;
      samples[t] = Solve(g, options, TrialSampleRng(4, t)).total_samples;
    });
    medians.push_back(Median(samples));
  }
  bool ok = true;
  std::string ratios;
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
    const double ratio = medians[i] / medians[i + 1];
    ok &= medians[i] >= medians[i + 1] && ratio >= 2.0 && ratio <= 16.0;
    ratios += Fmt("%s%.2f", i ? ", " : "", ratio);
  }
  return {ok, Fmt("median samples %.0f, %.0f, %.0f, %.0f; halving ratios %s", medians[0],
                  medians[1], medians[2], medians[3], ratios.c_str())};
}

// Uniform sampling at the calculator's per-profile count.
Verdict UniformSamplingBound() {
  const std::size_t trials = 200;
  const double delta = 0.1;
  std::vector<int> exact(trials, 0);
  std::vector<double> per_profile(trials, 0.0);
  ParallelFor(trials, [&](std::size_t t) {
    const PayoffTensor g = GeneratedGame(4, 0.1, 5, t);
    ComplexityInstance inst;
    inst.shape = g.shape();
    inst.m_max = 1.0;
    inst.delta = delta;
    inst.gap = MinimumPayoffGap(g);
    const double n = InfiniteAlphaSampleComplexity(inst).samples;
    per_profile[t] = n;
    BernoulliSimulator sim(g);
    Rng rng = TrialSampleRng(5, t);
    const EmpiricalPayoffs e = SampleUniformly(sim, static_cast<std::uint64_t>(n), rng);
    exact[t] = EdgeErrors(BuildResponseGraph(e.ToPayoffTensor(0.5, 1.0)), BuildResponseGraph(g)) ==
               0;
  });
  const int ok = std::accumulate(exact.begin(), exact.end(), 0);
  return {ok >= (1.0 - delta) * trials,
          Fmt("%d/200 exact recoveries (need %.0f), median N_s %.0f", ok, (1.0 - delta) * trials,
              Median(per_profile))};
}

// Interval endpoints and excludability against exhaustive orientation.
Verdict UncertaintyOracle() {
  Rng rng(6);
  double worst = 0.0;
  int mismatched = 0, states = 0;
  std::size_t max_uncertain = 0;
  for (int game = 0; game < 50; ++game) {
    const UncertainResponseGraph g = ClassifyEdges(testing::RandomBounds(rng, 0, 8));
    max_uncertain = std::max(max_uncertain, g.uncertain.size());
    for (std::size_t s = 0; s < g.num_nodes; ++s) {
      const RankingInterval ssp = RankingWeightInterval(s, g);
      const auto oracle = testing::EnumerateOrientations(s, g, 50);
      worst = std::max({worst, std::abs(ssp.pi_lo - oracle.pi_lo),
                        std::abs(ssp.pi_hi - oracle.pi_hi)});
      mismatched += ssp.excludable != oracle.excludable;
      ++states;
    }
  }
  return {worst <= 1e-9 && mismatched == 0,
          Fmt("50 games, %d states, up to %zu uncertain edges, max endpoint error %.2e, "
              "excludability mismatches %d",
              states, max_uncertain, worst, mismatched)};
}

// Clopper-Pearson nests inside clipped Hoeffding; both cover.
Verdict IntervalNestingAndCoverage() {
  int violations = 0, points = 0;
  for (int n : {1, 2, 5, 10, 50, 200, 1000}) {
    for (double f : {1e-6, 1e-3, 0.01, 0.05, 0.1, 0.3}) {
      for (int x = 0; x <= n; ++x) {
        const double mean = double(x) / n;
        const ConfidenceInterval cp = ClopperPearsonInterval(mean, n, f);
        const ConfidenceInterval h = ClipToRange(HoeffdingInterval(mean, n, f), {});
        violations += cp.lower < h.lower - 1e-12 || cp.upper > h.upper + 1e-12;
        ++points;
      }
    }
  }
  const int trials = 10000;
  const std::vector<int> ns{1, 5, 10, 50, 200};
  const std::vector<double> ps{0.05, 0.2, 0.5, 0.8, 0.95};
  const std::vector<double> fs{0.01, 0.05, 0.1, 0.3};
  const std::size_t cells = ns.size() * ps.size() * fs.size();
  std::vector<double> cp_cover(cells), h_cover(cells), level(cells);
  ParallelFor(cells, [&](std::size_t c) {
    const int n = ns[c / (ps.size() * fs.size())];
    const double p = ps[(c / fs.size()) % ps.size()];
    const double f = fs[c % fs.size()];
    Rng rng(7, c);
    int cp_hit = 0, h_hit = 0;
    for (int t = 0; t < trials; ++t) {
      int x = 0;
      for (int i = 0; i < n; ++i) x += rng.Bernoulli(p);
      const double mean = double(x) / n;
      cp_hit += ClopperPearsonInterval(mean, n, f).Contains(p);
      h_hit += HoeffdingInterval(mean, n, f).Contains(p);
    }
    cp_cover[c] = double(cp_hit) / trials;
    h_cover[c] = double(h_hit) / trials;
    level[c] = 1.0 - f;
  });
  int under = 0;
  double worst_margin = 1.0;
  for (std::size_t c = 0; c < cells; ++c) {
    under += cp_cover[c] < level[c];
    under += h_cover[c] < level[c];
    worst_margin = std::min({worst_margin, cp_cover[c] - level[c], h_cover[c] - level[c]});
  }
  return {violations == 0 && under == 0,
          Fmt("nesting violations %d/%d grid points; coverage below 1-f in %d of %zu "
              "method-cells (worst margin %+.4f)",
              violations, points, under, 2 * cells, worst_margin)};
}

std::vector<std::vector<double>> Full(int n, double v) {
  std::vector<std::vector<double>> out(n, std::vector<double>(n, v));
  for (int i = 0; i < n; ++i) out[i][i] = 0.0;
  return out;
}

Verdict EloChecks() {
  OutcomeBatch pair(2);
  pair.Add(0, 1, 1.0, 75);
  pair.Add(0, 1, 0.0, 25);
  const double two = std::abs(EloPredict(BatchEloFit(pair), 0, 1) - 0.75);

  const EloRatings rps = BatchEloFit(OutcomeBatch::FromWinMatrix(testing::RpsWinMatrix(), Full(3, 1)));
  double rps_err = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) rps_err = std::max(rps_err, std::abs(EloPredict(rps, a, b) - 0.5));
  }

  Rng rng(8);
  double row_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 9;
    auto p = Full(n, 0.0);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        p[a][b] = rng.Uniform();
        p[b][a] = 1.0 - p[a][b];
      }
    }
    const EloRatings r = BatchEloFit(OutcomeBatch::FromWinMatrix(p, Full(n, 1)));
    for (int a = 0; a < n; ++a) {
      double fitted = 0.0, observed = 0.0;
      for (int b = 0; b < n; ++b) {
        if (b == a) continue;
        fitted += EloPredict(r, a, b);
        observed += p[a][b];
      }
      row_err = std::max(row_err, std::abs(fitted - observed));
    }
  }
  return {two <= 1e-6 && rps_err <= 1e-9 && row_err <= 1e-5,
          Fmt("two-strategy error %.1e, RPS max |p - 0.5| %.1e, max row-sum error %.1e over 50 "
              "matrices",
              two, rps_err, row_err)};
}

Verdict KendallChecks() {
  using Buckets = std::vector<std::vector<std::size_t>>;
  int axiom_failures = 0;
  Rng rng(9);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.Below(8);
    const PartialRanking a = testing::RandomRanking(n, rng), b = testing::RandomRanking(n, rng),
                         c = testing::RandomRanking(n, rng);
    const double ab = KendallPartial(a, b, 0.5), ba = KendallPartial(b, a, 0.5);
    const bool same = a.BucketOf() == b.BucketOf();
    axiom_failures += KendallPartial(a, a, 0.5) != 0.0 || ab != ba || ab < 0.0 ||
                      KendallPartial(a, c, 0.5) > ab + KendallPartial(b, c, 0.5) + 1e-12 ||
                      (!same && ab <= 0.0);
  }
  int kernel_failures = 0;
  for (double p : {0.5, 0.3}) {
    kernel_failures += KendallPartial({Buckets{{0}, {1}}}, {Buckets{{0}, {1}}}, p) != 0.0;
    kernel_failures += KendallPartial({Buckets{{0}, {1}}}, {Buckets{{1}, {0}}}, p) != 1.0;
    kernel_failures += KendallPartial({Buckets{{0, 1}}}, {Buckets{{0, 1}}}, p) != 0.0;
    kernel_failures += KendallPartial({Buckets{{0, 1}}}, {Buckets{{1}, {0}}}, p) != p;
  }
  return {axiom_failures == 0 && kernel_failures == 0,
          Fmt("axiom failures %d/10000 triples, kernel case failures %d/8", axiom_failures,
              kernel_failures)};
}

bool Monotone(const std::vector<double>& objective) {
  for (std::size_t i = 1; i < objective.size(); ++i) {
    if (objective[i] > objective[i - 1] + 1e-12 * std::max(1.0, objective[i - 1])) return false;
  }
  return true;
}

Verdict CompletionChecks() {
  AlphaRankParams params;
  params.infinite_alpha = true;
  std::string detail;
  bool ok = true;
  int nonmonotone = 0, runs = 0;
  for (double rate : {0.5, 0.6}) {
    int exact = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(10, seed);
      const Eigen::MatrixXd p = testing::RankOneLogitTruth(8, 8, rng);
      const BoolMatrix mask = RandomMask(8, 8, rate, rng);
      const auto r =
          CompleteAndRank({p, mask}, CompletionTransform::kLogit, {}, params, rng, p);
      exact += *r.kendall_error == 0.0;
      nonmonotone += !Monotone(r.completion.objective);
      ++runs;
    }
    ok &= exact >= 18;
    detail += Fmt("%s%.0f%% observed: %d/20 exact", detail.empty() ? "" : ", ", 100 * rate, exact);
  }
  // Monotonicity also on unstructured matrices at several ranks.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(11, seed);
    const int rows = 4 + seed % 6, cols = 3 + seed % 7;
    CompletionOptions options;
    options.rank = 1 + seed % std::min(rows, cols);
    const Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return rng.Normal(); });
    const auto r = AlternatingMinimization({m, RandomMask(rows, cols, 0.5, rng)}, options, rng);
    nonmonotone += !Monotone(r.objective);
    ++runs;
  }
  ok &= nonmonotone == 0;
  return {ok, detail + Fmt("; nonmonotone objectives %d/%d runs", nonmonotone, runs)};
}

Verdict QualitativeTrends() {
  // Samples fall as delta grows.
  SweepConfig config;
  config.deltas = {0.01, 0.05, 0.1, 0.2, 0.4};
  config.trials = 100;
  config.seed = 12;
  const auto cells =
      RunRgucbSweep(config, [](std::size_t t) { return GeneratedGame(3, 0.1, 12, t); });
  // Mean over trials: games differ in cost by orders of magnitude, so a
  // cross-game median need not track the paired per-game trend.
  std::vector<double> by_delta, median_by_delta;
  for (double d : config.deltas) {
    std::vector<std::uint64_t> s;
    for (const auto& c : cells) {
      if (c.delta == d) s.push_back(c.samples);
    }
    by_delta.push_back(std::accumulate(s.begin(), s.end(), 0.0) / s.size());
    median_by_delta.push_back(Median(s));
  }
  bool samples_fall = true;
  for (std::size_t i = 1; i < by_delta.size(); ++i) samples_fall &= by_delta[i] <= by_delta[i - 1];

  // Ranking and table error fall along sampling trajectories.
  const std::size_t checkpoints = 10;
  std::vector<double> kendall(checkpoints, 0.0), frob(checkpoints, 0.0);
  AlphaRankParams params;
  params.infinite_alpha = true;
  for (std::size_t t = 0; t < 20; ++t) {
    const PayoffTensor g = GeneratedGame(3, 0.1, 13, t);
    const RgUcbResult run = Solve(g, RgUcbOptions{}, TrialSampleRng(13, t));
    const auto traj = RankErrorTrajectory(g, run, params, checkpoints);
    for (std::size_t c = 0; c < checkpoints; ++c) {
      kendall[c] += traj[c].kendall / 20;
      frob[c] += traj[c].frobenius / 20;
    }
  }
  const bool error_falls = kendall.back() < kendall.front() && frob.back() < frob.front();

  // Interval width grows with payoff uncertainty.
  const std::vector<double> widths{0.0, 0.01, 0.02, 0.05, 0.1, 0.2};
  Rng rng(14);
  int width_drops = 0;
  double total_first = 0.0, total_last = 0.0;
  for (int game = 0; game < 20; ++game) {
    const PayoffTensor g = testing::RandomGame(GameShape({3, 3}), rng);
    std::vector<double> previous(g.shape().num_profiles(), 0.0);
    for (std::size_t w = 0; w < widths.size(); ++w) {
      const auto intervals = AllRankingIntervals(WidenedBounds(g, widths[w]), {});
      for (std::size_t s = 0; s < intervals.size(); ++s) {
        const double width = intervals[s].pi_hi - intervals[s].pi_lo;
        width_drops += width < previous[s] - 1e-9;
        previous[s] = width;
        if (w == 0) total_first += width;
        if (w + 1 == widths.size()) total_last += width;
      }
    }
  }
  const bool width_grows = width_drops == 0 && total_last > total_first;
  return {samples_fall && error_falls && width_grows,
          Fmt("mean samples at delta 0.01..0.4: %.0f %.0f %.0f %.0f %.0f (medians %.0f .. "
              "%.0f); mean Kendall %.2f -> %.2f and Frobenius %.3f -> %.3f along "
              "trajectories; interval width %.3f -> %.3f (%d drops)",
              by_delta[0], by_delta[1], by_delta[2], by_delta[3], by_delta[4],
              median_by_delta.front(), median_by_delta.back(), kendall.front(),
              kendall.back(), frob.front(), frob.back(), total_first, total_last,
              width_drops)};
}

}  // namespace
}  // namespace mae

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<mae::Verdict()>>> criteria{
      {"transition matrix vs high-precision oracle", mae::FixationOracle},
      {"2x2 sole-sink game, symmetric sampler", mae::SoleSinkSampling},
      {"generated 4x4 games fully correct", mae::GeneratedCorrectness},
      {"sample cost vs payoff gap", mae::GapScaling},
      {"uniform sampling at calculator count", mae::UniformSamplingBound},
      {"ranking intervals vs exhaustive orientation", mae::UncertaintyOracle},
      {"Clopper-Pearson within Hoeffding, coverage", mae::IntervalNestingAndCoverage},
      {"Elo fits", mae::EloChecks},
      {"Kendall partial metric", mae::KendallChecks},
      {"rank-one logit completion", mae::CompletionChecks},
      {"qualitative trends", mae::QualitativeTrends},
  };
  // Optional arguments select criteria by number; default runs all.
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    const std::size_t n = std::strtoul(argv[a], nullptr, 10);
    if (n >= 1 && n <= criteria.size()) selected[n - 1] = true;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    const auto start = std::chrono::steady_clock::now();
    mae::Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::printf("[%s] criterion %zu: %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
