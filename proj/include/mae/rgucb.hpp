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

// ResponseGraphUCB: adaptive sampling that resolves every single-deviation
// payoff comparison of a game to a global confidence level 1 - delta.
//
// Each comparison is a two-armed pure-exploration problem. The sampler picks
// a profile involved in some unresolved comparison, observes one noisy
// outcome, and closes every comparison whose confidence intervals meet the
// stopping criterion. Interval levels come from AllocateConfidence with a
// per-comparison time index t = n_a + n_b.

#ifndef MAE_RGUCB_HPP_
#define MAE_RGUCB_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mae/confidence.hpp"
#include "mae/errors.hpp"
#include "mae/game.hpp"
#include "mae/response_graph.hpp"
#include "mae/rng.hpp"

namespace mae {

enum class SamplingScheme { kUniform, kUniformExhaustive, kValenceWeighted, kCountWeighted };

inline std::string ToString(SamplingScheme s) {
  switch (s) {
    case SamplingScheme::kUniform: return "U";
    case SamplingScheme::kUniformExhaustive: return "UE";
    case SamplingScheme::kValenceWeighted: return "VW";
    case SamplingScheme::kCountWeighted: return "CW";
  }
  return "?";
}

inline SamplingScheme ParseScheme(const std::string& s) {
  if (s == "U" || s == "u") return SamplingScheme::kUniform;
  if (s == "UE" || s == "ue") return SamplingScheme::kUniformExhaustive;
  if (s == "VW" || s == "vw") return SamplingScheme::kValenceWeighted;
  if (s == "CW" || s == "cw") return SamplingScheme::kCountWeighted;
  throw InputError("unknown sampling scheme '" + s + "'");
}

// Player `player` compares profiles a < b, which differ only in its strategy.
struct ComparisonProblem {
  std::size_t id = 0;
  int player = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  bool resolved = false;
  bool b_higher = false;
  std::uint64_t resolved_step = 0;
};

// One problem per unordered single-deviation pair:
// |S| * sum_k (|S^k| - 1) / 2 in total.
inline std::vector<ComparisonProblem> BuildComparisonList(const GameShape& shape) {
  std::vector<ComparisonProblem> out;
  ForEachDeviationPair(shape, [&](std::size_t a, std::size_t b, int k) {
    ComparisonProblem p;
    p.id = out.size();
    p.player = k;
    p.a = a;
    p.b = b;
    out.push_back(p);
  });
  return out;
}

struct RgUcbOptions {
  double delta = 0.1;
  SamplingScheme scheme = SamplingScheme::kUniformExhaustive;
  StoppingCriterion criterion = StoppingCriterion::kUcb;
  std::uint64_t budget = 100000;
  // Relaxed criteria accept overlaps shorter than this fraction of the
  // outcome range.
  double epsilon_relax_fraction = 0.05;
  bool record_history = true;
  // Exploit a symmetric constant-sum win-loss game: fully diagonal profiles
  // are known and every outcome also updates all player-permuted profiles.
  bool exploit_symmetry = false;
};

struct HistoryRecord {
  std::uint64_t step = 0;
  std::size_t profile = 0;
  std::vector<double> outcome;
  std::vector<std::size_t> resolved;
};

// Mutable sampler bookkeeping: empirical table, open comparisons, and the
// per-profile valence (number of open comparisons touching the profile).
class SamplerState {
 public:
  SamplerState(const GameShape& shape, double delta)
      : shape_(shape),
        empirical_(shape),
        problems_(BuildComparisonList(shape)),
        incident_(shape.num_profiles()),
        valence_(shape.num_profiles(), 0),
        known_(shape.num_profiles(), false),
        delta_(delta) {
    MAE_REQUIRE(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    for (const auto& p : problems_) {
      incident_[p.a].push_back(p.id);
      incident_[p.b].push_back(p.id);
      ++valence_[p.a];
      ++valence_[p.b];
    }
    open_count_ = problems_.size();
  }

  const GameShape& shape() const { return shape_; }
  const EmpiricalPayoffs& empirical() const { return empirical_; }
  EmpiricalPayoffs& mutable_empirical() { return empirical_; }
  const std::vector<ComparisonProblem>& problems() const { return problems_; }
  const std::vector<std::size_t>& incident(std::size_t profile) const {
    return incident_[profile];
  }
  std::size_t valence(std::size_t profile) const { return valence_[profile]; }
  std::size_t open_count() const { return open_count_; }
  double delta() const { return delta_; }
  std::uint64_t budget_used() const { return budget_used_; }
  void AddBudget() { ++budget_used_; }

  bool known(std::size_t profile) const { return known_[profile]; }
  const std::vector<double>& known_payoff(std::size_t profile) const {
    return known_payoffs_.at(profile);
  }
  void MarkKnown(std::size_t profile, std::vector<double> payoffs) {
    known_[profile] = true;
    if (known_payoffs_.empty()) known_payoffs_.resize(shape_.num_profiles());
    known_payoffs_[profile] = std::move(payoffs);
  }

  // A profile can be sampled iff it is unknown and in an open comparison.
  bool Sampleable(std::size_t profile) const {
    return valence_[profile] > 0 && !known_[profile];
  }

  std::vector<std::size_t> SampleableProfiles() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < shape_.num_profiles(); ++s) {
      if (Sampleable(s)) out.push_back(s);
    }
    return out;
  }

  void Resolve(std::size_t id, bool b_higher, std::uint64_t step) {
    ComparisonProblem& p = problems_[id];
    if (p.resolved) return;
    p.resolved = true;
    p.b_higher = b_higher;
    p.resolved_step = step;
    --valence_[p.a];
    --valence_[p.b];
    --open_count_;
  }

  // Observation count used for a profile's interval; known profiles have
  // exact payoffs and contribute nothing.
  std::uint64_t count(std::size_t profile) const {
    return known_[profile] ? 0 : empirical_.count(profile);
  }

  // Interval on player k's payoff at `profile` given the problem's time index.
  std::optional<ConfidenceInterval> Interval(std::size_t profile, int player, std::uint64_t t,
                                             ConfidenceMethod method,
                                             OutcomeRange range) const {
    if (known_[profile]) {
      const double v = known_payoffs_[profile][player];
      return ConfidenceInterval{v, v, v, method, 0.0};
    }
    const std::uint64_t n = empirical_.count(profile);
    if (n == 0) return std::nullopt;
    const double f = AllocateConfidence(delta_, shape_, t);
    return ClipToRange(MakeInterval(method, empirical_.mean(player, profile), n, f, range),
                       range);
  }

  // UE keeps one comparison until it resolves.
  std::optional<std::size_t> ue_problem;
  bool ue_second = false;

 private:
  GameShape shape_;
  EmpiricalPayoffs empirical_;
  std::vector<ComparisonProblem> problems_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::size_t> valence_;
  std::vector<bool> known_;
  std::vector<std::vector<double>> known_payoffs_;
  std::size_t open_count_ = 0;
  std::uint64_t budget_used_ = 0;
  double delta_;
};

// Next profile to observe.
//   U:  uniform over sampleable profiles.
//   UE: a uniformly chosen open comparison, its two profiles queried
//       alternately (lower index first) until it resolves.
//   VW: probability proportional to squared valence.
//   CW: lowest count, ties to the lowest index.
inline std::size_t SelectNext(SamplingScheme scheme, SamplerState& state, Rng& rng) {
  if (state.open_count() == 0) {
    throw ContractViolation("SelectNext called with no open comparisons");
  }
  switch (scheme) {
    case SamplingScheme::kUniform: {
      const auto active = state.SampleableProfiles();
      return active[rng.Below(active.size())];
    }
    case SamplingScheme::kUniformExhaustive: {
      if (!state.ue_problem || state.problems()[*state.ue_problem].resolved) {
        std::vector<std::size_t> open;
        for (const auto& p : state.problems()) {
          if (!p.resolved) open.push_back(p.id);
        }
        state.ue_problem = open[rng.Below(open.size())];
        state.ue_second = false;
      }
      const ComparisonProblem& p = state.problems()[*state.ue_problem];
      std::size_t pick;
      if (state.known(p.a)) {
        pick = p.b;
      } else if (state.known(p.b)) {
        pick = p.a;
      } else {
        pick = state.ue_second ? p.b : p.a;
        state.ue_second = !state.ue_second;
      }
      return pick;
    }
    case SamplingScheme::kValenceWeighted: {
      const auto active = state.SampleableProfiles();
      double total = 0.0;
      for (std::size_t s : active) {
        const double v = static_cast<double>(state.valence(s));
        total += v * v;
      }
      double u = rng.Uniform() * total;
      for (std::size_t s : active) {
        const double v = static_cast<double>(state.valence(s));
        u -= v * v;
        if (u < 0.0) return s;
      }
      return active.back();
    }
    case SamplingScheme::kCountWeighted: {
      std::size_t best = 0;
      bool found = false;
      for (std::size_t s = 0; s < state.shape().num_profiles(); ++s) {
        if (!state.Sampleable(s)) continue;
        if (!found || state.empirical().count(s) < state.empirical().count(best)) {
          best = s;
          found = true;
        }
      }
      return best;
    }
  }
  throw ContractViolation("unknown sampling scheme");
}

struct RgUcbResult {
  EmpiricalPayoffs empirical;
  ResponseGraph graph;
  std::vector<ComparisonProblem> problems;
  std::vector<HistoryRecord> history;
  std::uint64_t total_samples = 0;
  bool truncated = false;
};

namespace internal {

// Every distinct player permutation of profile `s`, paired with the outcome
// vector permuted to match: a sample o at s is a sample o' at s' where
// s'_j = s_{p(j)} and o'_j = o_{p(j)}. The identity comes first.
inline std::vector<std::pair<std::size_t, std::vector<double>>> SymmetricImages(
    const GameShape& shape, std::size_t index, const std::vector<double>& outcome) {
  const int num_players = shape.num_players();
  const StrategyProfile s = shape.Profile(index);
  std::vector<int> perm(num_players);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<std::size_t, std::vector<double>>> out;
  std::vector<bool> seen(shape.num_profiles(), false);
  StrategyProfile image(num_players);
  do {
    for (int j = 0; j < num_players; ++j) image[j] = s[perm[j]];
    const std::size_t idx = shape.Index(image);
    if (seen[idx]) continue;
    seen[idx] = true;
    std::vector<double> permuted(num_players);
    for (int j = 0; j < num_players; ++j) permuted[j] = outcome[perm[j]];
    out.emplace_back(idx, std::move(permuted));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Orbit representative: strategies sorted ascending.
inline std::size_t CanonicalProfile(const GameShape& shape, std::size_t index) {
  StrategyProfile s = shape.Profile(index);
  std::sort(s.begin(), s.end());
  return shape.Index(s);
}

inline bool IsFullyDiagonal(const GameShape& shape, std::size_t index) {
  const int first = shape.StrategyOf(index, 0);
  for (int k = 1; k < shape.num_players(); ++k) {
    if (shape.StrategyOf(index, k) != first) return false;
  }
  return true;
}

}  // namespace internal

// Checks every open comparison touching `touched` and closes those meeting
// the criterion. Returns the ids closed.
inline std::vector<std::size_t> ResolveTouched(SamplerState& state,
                                               const std::vector<std::size_t>& touched,
                                               const OutcomeSimulator& sim,
                                               const RgUcbOptions& options,
                                               std::uint64_t step) {
  const ConfidenceMethod method = MethodOf(options.criterion);
  std::vector<std::size_t> closed;
  for (std::size_t profile : touched) {
    for (std::size_t id : state.incident(profile)) {
      const ComparisonProblem& p = state.problems()[id];
      if (p.resolved) continue;
      const OutcomeRange range = sim.range(p.player);
      const std::uint64_t t = state.count(p.a) + state.count(p.b);
      if (t == 0) continue;
      const auto ca = state.Interval(p.a, p.player, t, method, range);
      const auto cb = state.Interval(p.b, p.player, t, method, range);
      if (!ca || !cb) continue;
      const Resolution r =
          IsResolved(options.criterion, *ca, *cb, options.epsilon_relax_fraction * range.width());
      if (r.resolved) {
        state.Resolve(id, r.b_higher, step);
        closed.push_back(id);
      }
    }
  }
  std::sort(closed.begin(), closed.end());
  return closed;
}

// Orients every comparison: resolved ones by their certified direction,
// open ones by current means (flagged uncertain).
inline ResponseGraph GraphFromState(const SamplerState& state) {
  ResponseGraph graph(state.shape().num_profiles());
  auto mean_of = [&](std::size_t s, int k) -> std::optional<double> {
    if (state.known(s)) return state.known_payoff(s)[k];
    if (!state.empirical().defined(s)) return std::nullopt;
    return state.empirical().mean(k, s);
  };
  for (const auto& p : state.problems()) {
    if (p.resolved) {
      graph.AddEdge(p.b_higher ? ResponseEdge{p.a, p.b, p.player, EdgeFlag::kCertain}
                               : ResponseEdge{p.b, p.a, p.player, EdgeFlag::kCertain});
      continue;
    }
    const auto ma = mean_of(p.a, p.player);
    const auto mb = mean_of(p.b, p.player);
    const bool b_higher = ma && mb ? *mb > *ma : mb.has_value();
    graph.AddEdge(b_higher ? ResponseEdge{p.a, p.b, p.player, EdgeFlag::kUncertain}
                           : ResponseEdge{p.b, p.a, p.player, EdgeFlag::kUncertain});
  }
  return graph;
}

// Runs the sampler until every comparison resolves or the budget runs out.
// Budget exhaustion is reported through `truncated`, not as an error.
inline RgUcbResult RunResponseGraphUcb(const OutcomeSimulator& sim, const RgUcbOptions& options,
                                       Rng& rng) {
  MAE_REQUIRE(options.budget >= 1, "budget must be at least 1");
  const GameShape& shape = sim.shape();
  if (options.exploit_symmetry) {
    for (int k = 1; k < shape.num_players(); ++k) {
      MAE_REQUIRE(shape.num_strategies(k) == shape.num_strategies(0),
                  "symmetric sampling needs equal strategy counts for all players");
    }
  }
  if (MethodOf(options.criterion) == ConfidenceMethod::kClopperPearson) {
    MAE_REQUIRE(sim.binary_outcomes(), "Clopper-Pearson needs binary outcomes");
  }

  SamplerState state(shape, options.delta);
  if (options.exploit_symmetry) {
    // Win-loss symmetry pins every fully diagonal profile at an equal split.
    for (std::size_t s = 0; s < shape.num_profiles(); ++s) {
      if (!internal::IsFullyDiagonal(shape, s)) continue;
      std::vector<double> payoff(shape.num_players());
      for (int k = 0; k < shape.num_players(); ++k) {
        const OutcomeRange r = sim.range(k);
        payoff[k] = r.lo + r.width() / shape.num_players();
      }
      state.MarkKnown(s, std::move(payoff));
    }
    std::vector<std::size_t> all(shape.num_profiles());
    std::iota(all.begin(), all.end(), 0);
    ResolveTouched(state, all, sim, options, 0);
  }

  RgUcbResult result;
  std::uint64_t step = 0;
  while (state.open_count() > 0 && state.budget_used() < options.budget) {
    std::size_t profile = SelectNext(options.scheme, state, rng);
    if (options.exploit_symmetry) profile = internal::CanonicalProfile(shape, profile);
    const std::vector<double> outcome = sim.Sample(profile, rng);
    state.AddBudget();
    ++step;

    std::vector<std::size_t> touched;
    if (options.exploit_symmetry) {
      for (auto& [idx, permuted] : internal::SymmetricImages(shape, profile, outcome)) {
        if (state.known(idx)) continue;
        state.mutable_empirical().Add(idx, permuted);
        touched.push_back(idx);
      }
    } else {
      state.mutable_empirical().Add(profile, outcome);
      touched.push_back(profile);
    }
    std::vector<std::size_t> closed = ResolveTouched(state, touched, sim, options, step);
    if (options.record_history) {
      result.history.push_back({step, profile, outcome, std::move(closed)});
    }
  }

  result.total_samples = state.budget_used();
  result.truncated = state.open_count() > 0;
  result.graph = GraphFromState(state);
  result.problems = state.problems();
  result.empirical = state.empirical();
  return result;
}

// History as JSON lines, one record per sample.
inline std::string HistoryToJsonLines(const RgUcbResult& result, const GameShape& shape) {
  std::string out;
  for (const auto& rec : result.history) {
    nlohmann::json line = {{"step", rec.step},
                           {"profile", shape.Profile(rec.profile)},
                           {"outcome", rec.outcome},
                           {"resolved", rec.resolved}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

inline nlohmann::json RgUcbSummaryJson(const RgUcbResult& result, const GameShape& shape) {
  nlohmann::json edges = nlohmann::json::array();
  const auto by_pair = result.graph.ByPair();
  for (const auto& p : result.problems) {
    const ResponseEdge& e = by_pair.at({p.a, p.b});
    edges.push_back({{"player", p.player},
                     {"from", shape.Profile(e.from)},
                     {"to", shape.Profile(e.to)},
                     {"resolved", p.resolved},
                     {"resolution_step", p.resolved ? nlohmann::json(p.resolved_step)
                                                    : nlohmann::json(nullptr)}});
  }
  nlohmann::json counts = nlohmann::json::array();
  for (std::size_t s = 0; s < shape.num_profiles(); ++s) {
    counts.push_back({{"profile", shape.Profile(s)}, {"count", result.empirical.count(s)}});
  }
  return {{"total_samples", result.total_samples},
          {"truncated", result.truncated},
          {"profile_counts", counts},
          {"edges", edges}};
}

}  // namespace mae

#endif  // MAE_RGUCB_HPP_
