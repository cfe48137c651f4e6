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

#ifndef MAE_CONFIDENCE_HPP_
#define MAE_CONFIDENCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "mae/errors.hpp"
#include "mae/game.hpp"

namespace mae {

enum class ConfidenceMethod { kHoeffding, kClopperPearson };

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  // Empirical mean the interval was built around.
  double center = 0.0;
  ConfidenceMethod method = ConfidenceMethod::kHoeffding;
  // Per-interval failure probability f.
  double level = 0.0;

  double width() const { return upper - lower; }
  bool Contains(double x) const { return lower <= x && x <= upper; }
};

// Per-interval failure probability that keeps the union over every
// comparison, time index t and count u <= t below delta:
//   f = 6 delta / (pi^2 |S| sum_k (|S^k| - 1) t^3).
inline double AllocateConfidence(double delta, const GameShape& shape, std::uint64_t t) {
  MAE_REQUIRE(t >= 1, "time index must be at least 1");
  const double t3 = static_cast<double>(t) * static_cast<double>(t) * static_cast<double>(t);
  return 6.0 * delta /
         (std::numbers::pi * std::numbers::pi * static_cast<double>(shape.num_profiles()) *
          shape.num_deviations() * t3);
}

inline ConfidenceInterval HoeffdingInterval(double mean, std::uint64_t n, double f,
                                            OutcomeRange range = {}) {
  MAE_REQUIRE(f > 0.0 && f < 1.0, "confidence level f must lie in (0, 1)");
  MAE_REQUIRE(n >= 1, "need at least one sample");
  const double half = std::sqrt(range.width() * range.width() * std::log(2.0 / f) /
                                (2.0 * static_cast<double>(n)));
  return {mean - half, mean + half, mean, ConfidenceMethod::kHoeffding, f};
}

// Exact binomial interval on outcomes in {range.lo, range.hi}:
// (B(f/2; x, n - x + 1), B(1 - f/2; x + 1, n - x)) with x the success count,
// lower = 0 at x = 0 and upper = 1 at x = n, then mapped back to the range.
inline ConfidenceInterval ClopperPearsonInterval(double mean, std::uint64_t n, double f,
                                                 OutcomeRange range = {}) {
  MAE_REQUIRE(f > 0.0 && f < 1.0, "confidence level f must lie in (0, 1)");
  MAE_REQUIRE(n >= 1, "need at least one sample");
  const double unit = (mean - range.lo) / range.width();
  MAE_REQUIRE(unit >= -1e-12 && unit <= 1.0 + 1e-12, "mean outside the outcome range");
  const double nd = static_cast<double>(n);
  const double x = std::clamp(std::round(unit * nd), 0.0, nd);
  const double lo = x <= 0.0 ? 0.0 : boost::math::ibeta_inv(x, nd - x + 1.0, f / 2.0);
  const double hi = x >= nd ? 1.0 : boost::math::ibeta_inv(x + 1.0, nd - x, 1.0 - f / 2.0);
  return {range.lo + lo * range.width(), range.lo + hi * range.width(), mean,
          ConfidenceMethod::kClopperPearson, f};
}

inline ConfidenceInterval MakeInterval(ConfidenceMethod method, double mean, std::uint64_t n,
                                       double f, OutcomeRange range = {}) {
  return method == ConfidenceMethod::kHoeffding ? HoeffdingInterval(mean, n, f, range)
                                                : ClopperPearsonInterval(mean, n, f, range);
}

inline ConfidenceInterval ClipToRange(ConfidenceInterval ci, OutcomeRange range) {
  ci.lower = std::clamp(ci.lower, range.lo, range.hi);
  ci.upper = std::clamp(ci.upper, range.lo, range.hi);
  return ci;
}

// Stopping criteria: UCB and CP-UCB need disjoint intervals; the relaxed
// variants accept an overlap shorter than epsilon_relax.
enum class StoppingCriterion { kUcb, kCpUcb, kRelaxedUcb, kRelaxedCpUcb };

inline ConfidenceMethod MethodOf(StoppingCriterion c) {
  return (c == StoppingCriterion::kUcb || c == StoppingCriterion::kRelaxedUcb)
             ? ConfidenceMethod::kHoeffding
             : ConfidenceMethod::kClopperPearson;
}

inline bool IsRelaxed(StoppingCriterion c) {
  return c == StoppingCriterion::kRelaxedUcb || c == StoppingCriterion::kRelaxedCpUcb;
}

inline std::string ToString(StoppingCriterion c) {
  switch (c) {
    case StoppingCriterion::kUcb: return "UCB";
    case StoppingCriterion::kCpUcb: return "CP-UCB";
    case StoppingCriterion::kRelaxedUcb: return "R-UCB";
    case StoppingCriterion::kRelaxedCpUcb: return "R-CP-UCB";
  }
  return "?";
}

inline StoppingCriterion ParseCriterion(const std::string& s) {
  if (s == "UCB" || s == "ucb") return StoppingCriterion::kUcb;
  if (s == "CP-UCB" || s == "cp-ucb") return StoppingCriterion::kCpUcb;
  if (s == "R-UCB" || s == "r-ucb") return StoppingCriterion::kRelaxedUcb;
  if (s == "R-CP-UCB" || s == "r-cp-ucb") return StoppingCriterion::kRelaxedCpUcb;
  throw InputError("unknown stopping criterion '" + s + "'");
}

struct Resolution {
  bool resolved = false;
  // True when b is judged to pay more than a.
  bool b_higher = false;
};

inline Resolution IsResolved(StoppingCriterion criterion, const ConfidenceInterval& a,
                             const ConfidenceInterval& b, double epsilon_relax = 0.0) {
  Resolution out;
  const double overlap = std::min(a.upper, b.upper) - std::max(a.lower, b.lower);
  if (IsRelaxed(criterion)) {
    // Equal means give no direction to commit to.
    out.resolved = overlap < epsilon_relax && a.center != b.center;
  } else {
    out.resolved = overlap < 0.0;
  }
  out.b_higher = b.center > a.center;
  return out;
}

}  // namespace mae

#endif  // MAE_CONFIDENCE_HPP_
