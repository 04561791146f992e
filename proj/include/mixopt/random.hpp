// Copyright 2026 The mixtureopt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIXOPT_RANDOM_HPP
#define MIXOPT_RANDOM_HPP

#include <cstdint>
#include <random>

namespace mixopt {

/// Named streams for seed derivation, so that the population, each
/// replication and the optimizer never share a random sequence.
enum class SeedStream : std::uint32_t {
  kPopulation = 1,
  kReplication = 2,
  kOptimizer = 3,
  kSimulation = 4,
};

/// Derives an independent child seed from a master seed, a stream tag and an
/// index. The derivation runs through std::seed_seq, whose algorithm is fixed
/// by the standard, so the result is identical on every conforming platform.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, SeedStream stream,
                                        std::uint64_t index = 0);

/// Seeded source of randomness. Each logical task owns its own instance.
class RandomSource {
 public:
  using engine_type = std::mt19937_64;

  explicit RandomSource(std::uint64_t seed) : seed_{seed}, engine_{seed} {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform draw in [0, 1).
  double uniform() { return unit_(engine_); }

  /// Gaussian draw with the given mean and standard deviation.
  double normal(double mean, double stddev) {
    return std::normal_distribution<double>{mean, stddev}(engine_);
  }

  engine_type& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  engine_type engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace mixopt

#endif  // MIXOPT_RANDOM_HPP
