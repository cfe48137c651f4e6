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

#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "mae/sample_complexity.hpp"

namespace mae {
namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// Direct evaluation of the finite-alpha right-hand side in 50-digit
// arithmetic, without any log-space rearrangement.
Big OracleFiniteAlpha(int s, int k, double eta, double m_max, double alpha, int m, double eps,
                      double delta) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  Big sigma = 0;
  for (int n = 1; n <= s - 1; ++n) {
    sigma += Big(boost::math::binomial_coefficient<double>(s, n)) * boost::multiprecision::pow(Big(n), s);
  }
  const Big am = Big(alpha) * Big(m_max);
  const Big l = 2 * Big(alpha) * exp(2 * am);
  const Big g = Big(eta) * (exp(2 * am) - 1) / (exp(2 * am * m) - 1);
  return 648 * Big(m_max) * Big(m_max) * log(Big(2) * s * k / Big(delta)) * l * l * sigma *
         sigma / (Big(eps) * Big(eps) * g * g);
}

TEST(InfiniteAlphaBoundTest, KnownValue) {
  ComplexityInstance inst;
  inst.shape = GameShape({2, 2});
  inst.gap = 0.2;
  inst.m_max = 1.0;
  inst.delta = 0.1;
  const SampleBound b = InfiniteAlphaSampleComplexity(inst);
  EXPECT_NEAR(b.rhs, 200.0 * std::log(160.0), 1e-9);
  EXPECT_EQ(b.samples, 1016.0);
}

TEST(InfiniteAlphaBoundTest, ScalesAsInverseSquareGap) {
  ComplexityInstance inst;
  inst.shape = GameShape({3, 3});
  inst.gap = 0.1;
  const double a = InfiniteAlphaSampleComplexity(inst).rhs;
  inst.gap = 0.05;
  EXPECT_NEAR(InfiniteAlphaSampleComplexity(inst).rhs / a, 4.0, 1e-12);
  inst.gap = 0.0;
  EXPECT_THROW(InfiniteAlphaSampleComplexity(inst), InputError);
}

TEST(FiniteAlphaBoundTest, MatchesHighPrecisionOracle) {
  ComplexityInstance inst;
  inst.shape = GameShape({2, 2});
  inst.m_max = 1.0;
  inst.alpha = 0.1;
  inst.m = 5;
  inst.delta = 0.1;
  inst.epsilon = 0.5 * FiniteAlphaEpsilonCap(inst.shape);
  const SampleBound b = FiniteAlphaSampleComplexity(inst);
  const Big oracle = OracleFiniteAlpha(4, 2, 0.5, 1.0, 0.1, 5, inst.epsilon, 0.1);
  EXPECT_NEAR(b.rhs / static_cast<double>(oracle), 1.0, 1e-12);
  EXPECT_EQ(b.samples, static_cast<double>(boost::multiprecision::floor(oracle) + 1));
}

TEST(FiniteAlphaBoundTest, OracleAgreesOverParameterGrid) {
  for (double alpha : {0.01, 0.5, 2.0}) {
    for (int m : {2, 10, 50}) {
      ComplexityInstance inst;
      inst.shape = GameShape({3, 2});
      inst.alpha = alpha;
      inst.m = m;
      inst.m_max = 1.0;
      inst.epsilon = 0.05;
      inst.delta = 0.05;
      const Big oracle = OracleFiniteAlpha(6, 2, inst.eta(), 1.0, alpha, m, 0.05, 0.05);
      EXPECT_NEAR(FiniteAlphaSampleComplexity(inst).log_rhs,
                  static_cast<double>(boost::multiprecision::log(oracle)), 1e-10);
    }
  }
}

TEST(FiniteAlphaBoundTest, HugeExponentsStayFinite) {
  ComplexityInstance inst;
  inst.shape = GameShape({10, 10});
  inst.alpha = 100.0;
  inst.m = 50;
  inst.epsilon = 0.1;
  const SampleBound b = FiniteAlphaSampleComplexity(inst);
  EXPECT_TRUE(std::isfinite(b.log_rhs));
  EXPECT_GT(b.log_rhs, 700.0);
  EXPECT_TRUE(std::isinf(b.samples));
}

TEST(FiniteAlphaBoundTest, EpsilonCapEnforced) {
  ComplexityInstance inst;
  inst.shape = GameShape({2, 2});
  // 18 / 16 * 424 exceeds 1, so the cap is 1.
  EXPECT_EQ(FiniteAlphaEpsilonCap(inst.shape), 1.0);
  inst.epsilon = 1.0;
  EXPECT_THROW(FiniteAlphaSampleComplexity(inst), InputError);
  inst.epsilon = 0.99;
  EXPECT_NO_THROW(FiniteAlphaSampleComplexity(inst));
}

TEST(FiniteAlphaBoundTest, EpsilonCapBelowOneForTinyGames) {
  // |S| = 2: 18 / 4 * C(2,1) * 1 = 9, still capped; |S| = 1 has no pairs.
  EXPECT_EQ(FiniteAlphaEpsilonCap(GameShape({2})), 1.0);
  ComplexityInstance inst;
  inst.shape = GameShape({1, 1});
  EXPECT_THROW(FiniteAlphaSampleComplexity(inst), InputError);
}

}  // namespace
}  // namespace mae
