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

#ifndef MAE_RNG_HPP_
#define MAE_RNG_HPP_

#include <cstdint>
#include <random>

namespace mae {

// Seeded random stream. Stream (seed, stream) is a fixed sequence, so each
// trial can own an independent stream and a run is reproducible from its
// master seed regardless of thread scheduling.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1).
  double Uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Uniform integer in [0, n); 0 when n <= 1.
  std::uint64_t Below(std::uint64_t n) {
    if (n <= 1) return 0;
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  double Normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mae

#endif  // MAE_RNG_HPP_
