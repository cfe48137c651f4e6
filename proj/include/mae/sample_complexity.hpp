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

// Per-profile sample counts that guarantee accurate alpha-Rank output with
// probability 1 - delta. Everything is evaluated in log space: the
// combinatorial factor alone reaches 100^100 for a 10x10 game.

#ifndef MAE_SAMPLE_COMPLEXITY_HPP_
#define MAE_SAMPLE_COMPLEXITY_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mae/errors.hpp"
#include "mae/game.hpp"

namespace mae {

struct ComplexityInstance {
  GameShape shape;
  double m_max = 1.0;
  double alpha = 1.0;
  int m = 50;
  double epsilon = 0.1;
  double delta = 0.1;
  // Minimum payoff gap over single-deviation pairs.
  double gap = 0.1;

  double eta() const { return shape.eta(); }
};

// A right-hand side R and the smallest integer strictly above it. `samples`
// is exact while R < 2^53 and saturates to infinity on overflow.
struct SampleBound {
  double log_rhs = 0.0;
  double rhs = 0.0;
  double samples = 1.0;
};

inline SampleBound BoundFromLog(double log_rhs) {
  SampleBound out;
  out.log_rhs = log_rhs;
  out.rhs = std::exp(log_rhs);
  out.samples = std::isfinite(out.rhs) ? std::floor(out.rhs) + 1.0
                                       : std::numeric_limits<double>::infinity();
  return out;
}

// log(e^x - 1) for x > 0.
inline double LogExpm1(double x) {
  return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

// log sum_{n=1}^{|S|-1} C(|S|, n) n^{|S|}.
inline double LogCombinatorialSum(double num_profiles) {
  const double s = num_profiles;
  double max_term = -std::numeric_limits<double>::infinity();
  const long last = static_cast<long>(s) - 1;
  auto term = [&](long n) {
    return std::lgamma(s + 1) - std::lgamma(n + 1.0) - std::lgamma(s - n + 1) +
           s * std::log(static_cast<double>(n));
  };
  for (long n = 1; n <= last; ++n) max_term = std::max(max_term, term(n));
  if (last < 1) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (long n = 1; n <= last; ++n) acc += std::exp(term(n) - max_term);
  return max_term + std::log(acc);
}

// Largest admissible epsilon for the finite-alpha bound:
// 18 * 2^{-|S|} * sum_n C(|S|, n) n^{|S|}, further capped at 1 since
// distribution errors cannot exceed 1.
inline double FiniteAlphaEpsilonCap(const GameShape& shape) {
  const double s = static_cast<double>(shape.num_profiles());
  const double log_cap = std::log(18.0) - s * std::log(2.0) + LogCombinatorialSum(s);
  return std::min(1.0, std::exp(log_cap));
}

// Finite-alpha bound:
//   N_s > 648 M^2 log(2|S|K/delta) L^2 Sigma^2 / (epsilon^2 g^2)
// with L = 2 alpha e^{2 alpha M}, g = eta (e^{2 alpha M} - 1) / (e^{2 alpha m M} - 1).
inline SampleBound FiniteAlphaSampleComplexity(const ComplexityInstance& inst) {
  MAE_REQUIRE(inst.m_max > 0 && inst.alpha > 0 && inst.m >= 2 && inst.delta > 0 &&
                  inst.delta < 1 && inst.epsilon > 0,
              "sample complexity needs positive M_max, alpha, epsilon, delta in (0,1), m >= 2");
  const double s = static_cast<double>(inst.shape.num_profiles());
  MAE_REQUIRE(s >= 2 && inst.shape.num_deviations() > 0,
              "sample complexity needs at least two profiles");
  const double cap = FiniteAlphaEpsilonCap(inst.shape);
  if (!(inst.epsilon < cap)) {
    throw InputError("epsilon must be below the admissible bound " + std::to_string(cap));
  }
  const double k = inst.shape.num_players();
  const double two_am = 2.0 * inst.alpha * inst.m_max;
  const double log_l = std::log(2.0 * inst.alpha) + two_am;
  const double log_g = std::log(inst.eta()) + LogExpm1(two_am) - LogExpm1(two_am * inst.m);
  const double log_rhs = std::log(648.0) + 2.0 * std::log(inst.m_max) +
                         std::log(std::log(2.0 * s * k / inst.delta)) + 2.0 * log_l +
                         2.0 * LogCombinatorialSum(s) - 2.0 * std::log(inst.epsilon) -
                         2.0 * log_g;
  return BoundFromLog(log_rhs);
}

// Infinite-alpha exact-recovery bound: N_s > 8 gap^{-2} M^2 log(2|S|K/delta).
inline SampleBound InfiniteAlphaSampleComplexity(const ComplexityInstance& inst) {
  MAE_REQUIRE(inst.gap > 0, "payoff gap must be positive");
  MAE_REQUIRE(inst.m_max > 0 && inst.delta > 0 && inst.delta < 1,
              "need M_max > 0 and delta in (0, 1)");
  const double s = static_cast<double>(inst.shape.num_profiles());
  const double k = inst.shape.num_players();
  const double log_rhs = std::log(8.0) - 2.0 * std::log(inst.gap) +
                         2.0 * std::log(inst.m_max) +
                         std::log(std::log(2.0 * s * k / inst.delta));
  return BoundFromLog(log_rhs);
}

}  // namespace mae

#endif  // MAE_SAMPLE_COMPLEXITY_HPP_
