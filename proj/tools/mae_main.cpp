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

// Command-line driver. Every subcommand reads its parameters from flags or a
// TOML-style --config file (flags win), derives all randomness from
// (--seed, trial index), and writes its outputs plus a resolved-config
// snapshot to --out. Exit status: 0 success, 1 runtime failure, 2 bad input.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mae/alpharank.hpp"
#include "mae/completion.hpp"
#include "mae/elo.hpp"
#include "mae/experiments.hpp"
#include "mae/game.hpp"
#include "mae/game_io.hpp"
#include "mae/metrics.hpp"
#include "mae/rgucb.hpp"
#include "mae/sample_complexity.hpp"
#include "mae/uncertainty.hpp"

namespace {

using mae::FormatDouble;
using nlohmann::json;

struct Common {
  std::uint64_t seed = 0;
  std::size_t trials = 20;
  std::string out = "mae_out";
  std::uint64_t budget = 100000;
};

void AddCommon(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--trials", c.trials, "Number of trials")->capture_default_str();
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--budget", c.budget, "Sample budget per run")->capture_default_str();
}

std::string OutPath(const Common& c, const std::string& name) {
  std::filesystem::create_directories(c.out);
  return (std::filesystem::path(c.out) / name).string();
}

void Write(const Common& c, const std::string& name, const std::string& text) {
  mae::internal::WriteFile(OutPath(c, name), text);
}

mae::PayoffTensor GameOrGenerated(const std::string& game_path, int strategies,
                                  const mae::BernoulliGameOptions& gen, std::uint64_t seed,
                                  std::size_t trial) {
  if (!game_path.empty()) return mae::LoadTable(game_path);
  mae::Rng rng = mae::TrialGameRng(seed, trial);
  return mae::GenerateBernoulliGame(strategies, gen, rng);
}

std::string ProfileLabel(const mae::GameShape& shape, std::size_t s) {
  std::string out = "(";
  for (int v : shape.Profile(s)) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + ")";
}

// Resolved settings of one subcommand as a config section. Empty values mean
// "unset" and are dropped so the file reads back unchanged.
std::string ResolvedConfig(const CLI::App& sub) {
  std::istringstream in(sub.config_to_str(true, false));
  std::string out = "[" + sub.get_name() + "]\n";
  for (std::string line; std::getline(in, line);) {
    if (line.size() >= 3 && line.compare(line.size() - 3, 3, "=\"\"") == 0) continue;
    out += line + '\n';
  }
  return out;
}

// ---- alpharank -----------------------------------------------------------

struct AlphaRankCmd {
  std::string game;
  double alpha = 10.0;
  std::vector<double> alpha_sweep;
  bool infinite = false;
  int m = 50;
  double perturbation = 1e-4;
  bool no_sweep = false;
  bool single = false;
};

std::string OrderingCsv(const mae::RankingDistribution& r, const mae::PayoffTensor& game,
                        mae::PopulationMode mode) {
  std::ostringstream out;
  out << "rank,state,pi\n";
  for (std::size_t b = 0; b < r.ordering.size(); ++b) {
    for (std::size_t s : r.ordering[b]) {
      const std::string label =
          mode == mae::PopulationMode::kMulti ? ProfileLabel(game.shape(), s) : std::to_string(s);
      out << b + 1 << ",\"" << label << "\"," << FormatDouble(r.pi[s]) << '\n';
    }
  }
  return out.str();
}

void RunAlphaRank(const AlphaRankCmd& cmd, const Common& c) {
  const mae::PayoffTensor game = mae::LoadTable(cmd.game);
  mae::AlphaRankParams params;
  params.alpha = cmd.alpha;
  params.infinite_alpha = cmd.infinite;
  params.m = cmd.m;
  params.perturbation = cmd.perturbation;
  params.sweep_perturbation = !cmd.no_sweep;
  params.mode = cmd.single ? mae::PopulationMode::kSingle : mae::PopulationMode::kMulti;
  if (cmd.alpha_sweep.empty()) {
    const auto r = mae::AlphaRank(game, params);
    Write(c, "ranking.json", mae::RankingToJson(r, game, params).dump(2) + "\n");
    Write(c, "ordering.csv", OrderingCsv(r, game, params.mode));
    std::cout << OrderingCsv(r, game, params.mode);
    return;
  }
  std::ostringstream summary;
  summary << "alpha,top_states,top_mass,residual\n";
  params.infinite_alpha = false;
  for (double a : cmd.alpha_sweep) {
    params.alpha = a;
    const auto model = mae::BuildTransitionMatrix(game, params);
    const auto r = mae::StationaryDistribution(model);
    const std::string tag = FormatDouble(a);
    Write(c, "ranking_alpha_" + tag + ".json", mae::RankingToJson(r, game, params).dump(2) + "\n");
    std::string top;
    for (std::size_t s : r.ordering.front()) {
      top += (top.empty() ? "" : " ") + (params.mode == mae::PopulationMode::kMulti
                                             ? ProfileLabel(game.shape(), s)
                                             : std::to_string(s));
    }
    summary << tag << ",\"" << top << "\"," << FormatDouble(r.pi[r.ordering.front().front()])
            << ',' << FormatDouble(mae::StationaryResidual(model.matrix, r.pi)) << '\n';
  }
  Write(c, "alpha_sweep.csv", summary.str());
  std::cout << summary.str();
}

// ---- rgucb / sweep-rgucb --------------------------------------------------

struct RgUcbCmd {
  std::string game;
  int strategies = 4;
  double gap = 0.1;
  double delta = 0.1;
  std::string scheme = "UE";
  std::string criterion = "UCB";
  bool symmetric = false;
  double relax = 0.05;
};

void RunRgUcb(const RgUcbCmd& cmd, const Common& c) {
  mae::BernoulliGameOptions gen;
  gen.gap = cmd.gap;
  const mae::PayoffTensor game = GameOrGenerated(cmd.game, cmd.strategies, gen, c.seed, 0);
  const mae::BernoulliSimulator sim(game);
  mae::RgUcbOptions options;
  options.delta = cmd.delta;
  options.scheme = mae::ParseScheme(cmd.scheme);
  options.criterion = mae::ParseCriterion(cmd.criterion);
  options.budget = c.budget;
  options.exploit_symmetry = cmd.symmetric;
  options.epsilon_relax_fraction = cmd.relax;
  mae::Rng rng = mae::TrialSampleRng(c.seed, 0);
  const auto run = mae::RunResponseGraphUcb(sim, options, rng);
  json summary = mae::RgUcbSummaryJson(run, game.shape());
  summary["edge_errors"] = mae::EdgeErrors(run.graph, mae::BuildResponseGraph(game));
  Write(c, "history.jsonl", mae::HistoryToJsonLines(run, game.shape()));
  Write(c, "summary.json", summary.dump(2) + "\n");
  if (cmd.game.empty()) mae::SaveGameJson(game, OutPath(c, "game.json"));
  std::cout << "total_samples " << run.total_samples << " truncated " << run.truncated
            << " edge_errors " << summary["edge_errors"] << '\n';
}

struct SweepCmd {
  std::string game;
  int strategies = 4;
  double gap = 0.1;
  std::vector<double> deltas{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  std::vector<std::string> schemes{"UE"};
  std::vector<std::string> criteria{"UCB", "R-UCB", "CP-UCB", "R-CP-UCB"};
  unsigned workers = 0;
};

void RunSweep(const SweepCmd& cmd, const Common& c) {
  mae::SweepConfig config;
  config.schemes.clear();
  config.criteria.clear();
  for (const auto& s : cmd.schemes) config.schemes.push_back(mae::ParseScheme(s));
  for (const auto& s : cmd.criteria) config.criteria.push_back(mae::ParseCriterion(s));
  config.deltas = cmd.deltas;
  config.trials = c.trials;
  config.seed = c.seed;
  config.budget = c.budget;
  config.workers = cmd.workers;
  mae::BernoulliGameOptions gen;
  gen.gap = cmd.gap;
  const auto cells = mae::RunRgucbSweep(config, [&](std::size_t t) {
    return GameOrGenerated(cmd.game, cmd.strategies, gen, c.seed, t);
  });
  Write(c, "cells.csv", mae::SweepCsv(cells));
  Write(c, "summary.csv", mae::SweepSummaryCsv(cells));
  std::cout << mae::SweepSummaryCsv(cells);
}

// ---- uncertainty ----------------------------------------------------------

struct UncertaintyCmd {
  std::string game;
  std::string lower;
  std::string upper;
  std::vector<double> half_widths{0.0, 0.005, 0.01, 0.02, 0.05, 0.1};
  int m = 50;
  bool single = false;
};

void RunUncertainty(const UncertaintyCmd& cmd, const Common& c) {
  mae::UncertaintyParams params;
  params.m = cmd.m;
  params.mode = cmd.single ? mae::PopulationMode::kSingle : mae::PopulationMode::kMulti;
  std::string csv;
  if (!cmd.lower.empty() || !cmd.upper.empty()) {
    MAE_REQUIRE(!cmd.lower.empty() && !cmd.upper.empty(), "--lower and --upper go together");
    const mae::PayoffBounds bounds{mae::LoadTable(cmd.lower), mae::LoadTable(cmd.upper)};
    double level = 0.0;
    for (int k = 0; k < bounds.shape().num_players(); ++k) {
      for (std::size_t s = 0; s < bounds.shape().num_profiles(); ++s) {
        level = std::max(level, 0.5 * (bounds.upper(k, s) - bounds.lower(k, s)));
      }
    }
    csv = mae::RankingIntervalsCsv(mae::AllRankingIntervals(bounds, params), bounds.shape(),
                                   params.mode, level);
  } else {
    MAE_REQUIRE(!cmd.game.empty(), "uncertainty needs --game or --lower/--upper");
    const mae::PayoffTensor game = mae::LoadTable(cmd.game);
    bool header = true;
    for (double w : cmd.half_widths) {
      const auto bounds = mae::WidenedBounds(game, w, {-game.m_max(), game.m_max()});
      csv += mae::RankingIntervalsCsv(mae::AllRankingIntervals(bounds, params), game.shape(),
                                      params.mode, w, header);
      header = false;
    }
  }
  Write(c, "intervals.csv", csv);
  std::cout << csv;
}

// ---- elo ------------------------------------------------------------------

struct EloCmd {
  std::string win_matrix;
  std::string counts;
  double reg = 1e-9;
};

void RunElo(const EloCmd& cmd, const Common& c) {
  std::vector<std::string> names;
  const auto p = mae::internal::ReadCsvMatrix(cmd.win_matrix, &names);
  std::vector<std::vector<double>> n(p.size(), std::vector<double>(p.size(), 1.0));
  if (!cmd.counts.empty()) {
    std::vector<std::string> count_names;
    n = mae::internal::ReadCsvMatrix(cmd.counts, &count_names);
  }
  mae::EloFitOptions options;
  options.reg = cmd.reg;
  const auto ratings = mae::BatchEloFit(mae::OutcomeBatch::FromWinMatrix(p, n), options);
  const json doc = mae::EloToJson(ratings, names);
  Write(c, "ratings.json", doc.dump(2) + "\n");
  std::cout << doc.dump(2) << '\n';
}

// ---- bounds ---------------------------------------------------------------

struct BoundsCmd {
  std::string kind = "infinite";
  std::vector<int> shape{2, 2};
  double m_max = 1.0;
  double alpha = 1.0;
  int m = 50;
  double epsilon = 0.1;
  double delta = 0.1;
  double gap = 0.1;
};

void RunBounds(const BoundsCmd& cmd, const Common& c) {
  json doc;
  std::ostringstream text;
  if (cmd.kind == "elo") {
    MAE_REQUIRE(!cmd.shape.empty(), "--shape needs the strategy count");
    const int n = cmd.shape.front();
    const auto b = mae::EloSampleComplexity(n, cmd.epsilon, cmd.delta);
    text << "N > 0.5 * " << n << "^2 * " << FormatDouble(cmd.epsilon) << "^-2 * log(" << n
         << "^2 / " << FormatDouble(cmd.delta) << ") = " << FormatDouble(b.rhs) << '\n';
    doc = {{"kind", "elo"}, {"rhs", b.rhs}, {"samples_per_pair", b.samples}};
    text << "samples_per_pair " << FormatDouble(b.samples) << '\n';
  } else {
    mae::ComplexityInstance inst;
    inst.shape = mae::GameShape(cmd.shape);
    inst.m_max = cmd.m_max;
    inst.alpha = cmd.alpha;
    inst.m = cmd.m;
    inst.epsilon = cmd.epsilon;
    inst.delta = cmd.delta;
    inst.gap = cmd.gap;
    const double s = static_cast<double>(inst.shape.num_profiles());
    const int k = inst.shape.num_players();
    mae::SampleBound b;
    if (cmd.kind == "infinite") {
      b = mae::InfiniteAlphaSampleComplexity(inst);
      text << "N_s > 8 * " << FormatDouble(cmd.gap) << "^-2 * " << FormatDouble(cmd.m_max)
           << "^2 * log(2 * " << s << " * " << k << " / " << FormatDouble(cmd.delta)
           << ") = " << FormatDouble(b.rhs) << '\n';
    } else if (cmd.kind == "finite") {
      b = mae::FiniteAlphaSampleComplexity(inst);
      text << "N_s > 648 M^2 log(2|S|K/delta) L^2 Sigma^2 / (epsilon^2 g^2) with |S|=" << s
           << " K=" << k << " alpha=" << FormatDouble(cmd.alpha) << " m=" << cmd.m
           << " eta=" << FormatDouble(inst.eta()) << " epsilon=" << FormatDouble(cmd.epsilon)
           << " delta=" << FormatDouble(cmd.delta) << ": log N_s > "
           << FormatDouble(b.log_rhs) << '\n';
      doc["epsilon_cap"] = mae::FiniteAlphaEpsilonCap(inst.shape);
    } else {
      throw mae::InputError("--kind must be finite, infinite or elo");
    }
    doc["kind"] = cmd.kind;
    doc["log_rhs"] = b.log_rhs;
    doc["rhs"] = b.rhs;
    doc["samples_per_profile"] = b.samples;
    text << "samples_per_profile " << FormatDouble(b.samples) << '\n';
  }
  Write(c, "bounds.json", doc.dump(2) + "\n");
  std::cout << text.str();
}

// ---- gen-game -------------------------------------------------------------

struct GenGameCmd {
  int strategies = 4;
  double gap = 0.1;
  double min_pair_gap = 0.0;
};

void RunGenGame(const GenGameCmd& cmd, const Common& c) {
  mae::BernoulliGameOptions gen;
  gen.gap = cmd.gap;
  gen.min_pair_gap = cmd.min_pair_gap;
  mae::Rng rng = mae::TrialGameRng(c.seed, 0);
  const auto game = mae::GenerateBernoulliGame(cmd.strategies, gen, rng);
  mae::SaveGameJson(game, OutPath(c, "game.json"));
  std::cout << OutPath(c, "game.json") << '\n';
}

// ---- completion -----------------------------------------------------------

struct CompletionCmd {
  std::string game;
  int strategies = 8;
  std::vector<std::string> transforms{"payoff", "logit", "odds"};
  std::vector<int> ranks{1, 2, 3};
  std::vector<double> obs_rates{0.2, 0.4, 0.6, 0.8, 1.0};
  int iterations = 200;
  bool infinite = true;
};

// Rank-one logit truth: P = sigmoid(u v^T) with standard-normal u, v.
Eigen::MatrixXd RankOneLogitTruth(int n, mae::Rng& rng) {
  Eigen::VectorXd u(n), v(n);
  for (int i = 0; i < n; ++i) u(i) = rng.Normal();
  for (int i = 0; i < n; ++i) v(i) = rng.Normal();
  return (u * v.transpose()).unaryExpr([](double x) { return mae::Logistic(x); });
}

void RunCompletion(const CompletionCmd& cmd, const Common& c) {
  mae::AlphaRankParams params;
  params.infinite_alpha = cmd.infinite;
  std::ostringstream csv;
  csv << "transform,rank,obs_rate,seed,kendall_error\n";
  for (std::size_t t = 0; t < c.trials; ++t) {
    Eigen::MatrixXd truth;
    if (!cmd.game.empty()) {
      const auto game = mae::LoadTable(cmd.game);
      MAE_REQUIRE(game.num_players() == 2, "completion needs a two-player table");
      truth.resize(game.shape().num_strategies(0), game.shape().num_strategies(1));
      for (int i = 0; i < truth.rows(); ++i) {
        for (int j = 0; j < truth.cols(); ++j) truth(i, j) = game(0, game.shape().Index({i, j}));
      }
    } else {
      mae::Rng rng = mae::TrialGameRng(c.seed, t);
      truth = RankOneLogitTruth(cmd.strategies, rng);
    }
    for (const auto& name : cmd.transforms) {
      for (int rank : cmd.ranks) {
        if (rank > std::min(truth.rows(), truth.cols())) continue;
        for (double rate : cmd.obs_rates) {
          mae::Rng rng = mae::TrialSampleRng(c.seed, t);
          mae::MaskedMatrix masked{truth, mae::RandomMask(truth.rows(), truth.cols(), rate, rng)};
          if (masked.mask.count() == 0) masked.mask(0, 0) = true;
          mae::CompletionOptions options;
          options.rank = rank;
          options.iterations = cmd.iterations;
          const auto r = mae::CompleteAndRank(masked, mae::ParseTransform(name), options, params,
                                              rng, truth);
          csv << name << ',' << rank << ',' << FormatDouble(rate) << ',' << t << ','
              << FormatDouble(*r.kendall_error) << '\n';
        }
      }
    }
  }
  Write(c, "completion.csv", csv.str());
  std::cout << csv.str();
}

// ---- rank-error -----------------------------------------------------------

struct RankErrorCmd {
  std::string game;
  int strategies = 4;
  double gap = 0.1;
  double delta = 0.1;
  std::string scheme = "UE";
  std::string criterion = "UCB";
  std::size_t checkpoints = 10;
  bool infinite = true;
};

void RunRankError(const RankErrorCmd& cmd, const Common& c) {
  mae::BernoulliGameOptions gen;
  gen.gap = cmd.gap;
  mae::AlphaRankParams params;
  params.infinite_alpha = cmd.infinite;
  std::vector<std::vector<mae::RankErrorPoint>> runs(c.trials);
  mae::ParallelFor(c.trials, [&](std::size_t t) {
    const auto game = GameOrGenerated(cmd.game, cmd.strategies, gen, c.seed, t);
    const mae::BernoulliSimulator sim(game);
    mae::RgUcbOptions options;
    options.delta = cmd.delta;
    options.scheme = mae::ParseScheme(cmd.scheme);
    options.criterion = mae::ParseCriterion(cmd.criterion);
    options.budget = c.budget;
    mae::Rng rng = mae::TrialSampleRng(c.seed, t);
    const auto run = mae::RunResponseGraphUcb(sim, options, rng);
    runs[t] = mae::RankErrorTrajectory(game, run, params, cmd.checkpoints);
  });
  std::ostringstream csv, summary;
  csv << "trial,fraction,samples,frobenius,kendall\n";
  summary << "fraction,median_frobenius,median_kendall\n";
  for (std::size_t t = 0; t < runs.size(); ++t) {
    for (const auto& p : runs[t]) {
      csv << t << ',' << FormatDouble(p.fraction) << ',' << p.samples << ','
          << FormatDouble(p.frobenius) << ',' << FormatDouble(p.kendall) << '\n';
    }
  }
  for (std::size_t i = 0; i < cmd.checkpoints; ++i) {
    std::vector<double> frob, kendall;
    for (const auto& r : runs) {
      frob.push_back(r[i].frobenius);
      kendall.push_back(r[i].kendall);
    }
    summary << FormatDouble(static_cast<double>(i + 1) / cmd.checkpoints) << ','
            << FormatDouble(mae::Median(frob)) << ',' << FormatDouble(mae::Median(kendall))
            << '\n';
  }
  Write(c, "rank_error.csv", csv.str());
  Write(c, "rank_error_summary.csv", summary.str());
  std::cout << summary.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent evaluation under incomplete information"};
  app.set_config("--config", "", "TOML-style config file; flags override it");
  app.require_subcommand(1);
  Common common;

  AlphaRankCmd ar;
  auto* alpharank = app.add_subcommand("alpharank", "Rank a payoff table with alpha-Rank");
  AddCommon(alpharank, common);
  alpharank->add_option("--game", ar.game, "Table: game.json or p1.csv,p2.csv")->required();
  alpharank->add_option("--alpha", ar.alpha, "Selection intensity")->capture_default_str();
  alpharank->add_option("--alpha-sweep", ar.alpha_sweep, "Rank once per listed alpha")
      ->delimiter(',');
  alpharank->add_flag("--infinite", ar.infinite, "Infinite-alpha limit");
  alpharank->add_option("--m", ar.m, "Population size")->capture_default_str();
  alpharank->add_option("--perturbation", ar.perturbation, "Infinite-alpha perturbation")
      ->capture_default_str();
  alpharank->add_flag("--no-sweep", ar.no_sweep, "Use --perturbation without a sweep");
  alpharank->add_flag("--single-population", ar.single, "Single-population mode");

  RgUcbCmd rg;
  auto* rgucb = app.add_subcommand("rgucb", "Run ResponseGraphUCB once");
  AddCommon(rgucb, common);
  rgucb->add_option("--game", rg.game, "Table; omitted: generate a Bernoulli game");
  rgucb->add_option("--strategies", rg.strategies, "Generated game size")->capture_default_str();
  rgucb->add_option("--gap", rg.gap, "Generated game payoff gap")->capture_default_str();
  rgucb->add_option("--delta", rg.delta, "Error tolerance")->capture_default_str();
  rgucb->add_option("--scheme", rg.scheme, "U, UE, VW or CW")->capture_default_str();
  rgucb->add_option("--criterion", rg.criterion, "UCB, CP-UCB, R-UCB or R-CP-UCB")
      ->capture_default_str();
  rgucb->add_option("--relax", rg.relax, "Relaxed overlap as a fraction of the range")
      ->capture_default_str();
  rgucb->add_flag("--symmetric", rg.symmetric, "Exploit a symmetric win-loss game");

  SweepCmd sw;
  auto* sweep = app.add_subcommand("sweep-rgucb", "Grid of ResponseGraphUCB runs");
  AddCommon(sweep, common);
  sweep->add_option("--game", sw.game, "Table; omitted: one generated game per trial");
  sweep->add_option("--strategies", sw.strategies, "Generated game size")->capture_default_str();
  sweep->add_option("--gap", sw.gap, "Generated game payoff gap")->capture_default_str();
  sweep->add_option("--deltas", sw.deltas, "Error tolerances")->capture_default_str()
      ->delimiter(',');
  sweep->add_option("--schemes", sw.schemes, "Sampling schemes")->capture_default_str()
      ->delimiter(',');
  sweep->add_option("--criteria", sw.criteria, "Stopping criteria")->capture_default_str()
      ->delimiter(',');
  sweep->add_option("--workers", sw.workers, "Threads (0: all cores)")->capture_default_str();

  UncertaintyCmd un;
  auto* uncertainty = app.add_subcommand("uncertainty", "Ranking intervals from payoff bounds");
  AddCommon(uncertainty, common);
  uncertainty->add_option("--game", un.game, "Table widened by each --half-widths value");
  uncertainty->add_option("--lower", un.lower, "Lower-bound table");
  uncertainty->add_option("--upper", un.upper, "Upper-bound table");
  uncertainty->add_option("--half-widths", un.half_widths, "Payoff interval half widths")
      ->capture_default_str()
      ->delimiter(',');
  uncertainty->add_option("--m", un.m, "Population size")->capture_default_str();
  uncertainty->add_flag("--single-population", un.single, "Single-population mode");

  EloCmd el;
  auto* elo = app.add_subcommand("elo", "Fit batch Elo ratings to a win-rate matrix");
  AddCommon(elo, common);
  elo->add_option("--win-matrix", el.win_matrix, "CSV of row-vs-column win rates")->required();
  elo->add_option("--counts", el.counts, "CSV of per-pair game counts (default 1)");
  elo->add_option("--reg", el.reg, "Ridge weight")->capture_default_str();

  BoundsCmd bd;
  auto* bounds = app.add_subcommand("bounds", "Sample-complexity calculators");
  AddCommon(bounds, common);
  bounds->add_option("--kind", bd.kind, "finite, infinite or elo")->capture_default_str();
  bounds->add_option("--shape", bd.shape, "Strategies per player (elo: strategy count)")
      ->capture_default_str()
      ->delimiter(',');
  bounds->add_option("--m-max", bd.m_max, "Payoff magnitude bound")->capture_default_str();
  bounds->add_option("--alpha", bd.alpha, "Selection intensity")->capture_default_str();
  bounds->add_option("--m", bd.m, "Population size")->capture_default_str();
  bounds->add_option("--epsilon", bd.epsilon, "Accuracy")->capture_default_str();
  bounds->add_option("--delta", bd.delta, "Error tolerance")->capture_default_str();
  bounds->add_option("--gap", bd.gap, "Minimum payoff gap")->capture_default_str();

  GenGameCmd gg;
  auto* gen_game = app.add_subcommand("gen-game", "Generate a symmetric Bernoulli game");
  AddCommon(gen_game, common);
  gen_game->add_option("--strategies", gg.strategies, "Strategies")->capture_default_str();
  gen_game->add_option("--gap", gg.gap, "Minimum distance from 0.5")->capture_default_str();
  gen_game->add_option("--min-pair-gap", gg.min_pair_gap, "Minimum single-deviation gap")
      ->capture_default_str();

  CompletionCmd cp;
  auto* completion = app.add_subcommand("completion", "Completion-then-rank grid");
  AddCommon(completion, common);
  completion->add_option("--game", cp.game, "Two-player table; omitted: rank-one logit truth");
  completion->add_option("--strategies", cp.strategies, "Generated size")->capture_default_str();
  completion->add_option("--transforms", cp.transforms, "payoff, logit, odds")
      ->capture_default_str()
      ->delimiter(',');
  completion->add_option("--ranks", cp.ranks, "Factor ranks")->capture_default_str()
      ->delimiter(',');
  completion->add_option("--obs-rates", cp.obs_rates, "Observation rates")->capture_default_str()
      ->delimiter(',');
  completion->add_option("--iterations", cp.iterations, "Sweeps")->capture_default_str();

  RankErrorCmd re;
  auto* rank_error = app.add_subcommand("rank-error", "Errors along sampling trajectories");
  AddCommon(rank_error, common);
  rank_error->add_option("--game", re.game, "Table; omitted: one generated game per trial");
  rank_error->add_option("--strategies", re.strategies, "Generated size")->capture_default_str();
  rank_error->add_option("--gap", re.gap, "Generated game payoff gap")->capture_default_str();
  rank_error->add_option("--delta", re.delta, "Error tolerance")->capture_default_str();
  rank_error->add_option("--scheme", re.scheme, "Sampling scheme")->capture_default_str();
  rank_error->add_option("--criterion", re.criterion, "Stopping criterion")
      ->capture_default_str();
  rank_error->add_option("--checkpoints", re.checkpoints, "Points along each trajectory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Write(common, "config.toml", ResolvedConfig(*sub));
    if (sub == alpharank) RunAlphaRank(ar, common);
    if (sub == rgucb) RunRgUcb(rg, common);
    if (sub == sweep) RunSweep(sw, common);
    if (sub == uncertainty) RunUncertainty(un, common);
    if (sub == elo) RunElo(el, common);
    if (sub == bounds) RunBounds(bd, common);
    if (sub == gen_game) RunGenGame(gg, common);
    if (sub == completion) RunCompletion(cp, common);
    if (sub == rank_error) RunRankError(re, common);
  } catch (const mae::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
