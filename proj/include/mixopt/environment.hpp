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

#ifndef MIXOPT_ENVIRONMENT_HPP
#define MIXOPT_ENVIRONMENT_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mixopt/policies.hpp"
#include "mixopt/random.hpp"

namespace mixopt {

/// Ground-truth reward model, linear in the features:
///
///   q(x, no coupon) = base_weight * x[d-1]
///   q(x, coupon)    = q(x, no coupon) + sum_k uplift_weights[k] * x[k] - coupon_cost
///
/// Observed rewards add zero-mean Gaussian noise with standard deviation noise_std.
struct RewardModel {
  double base_weight = 1.0;
  std::vector<double> uplift_weights;
  double coupon_cost = 0.0;
  double noise_std = 0.0;

  /// Throws ConfigError on negative noise, non-finite coefficients, or a
  /// dimension mismatch with `dim`.
  void validate(std::size_t dim) const;
};

struct LogEntry {
  Context context;
  Action action;
  double reward = 0.0;
  /// Probability of `action` under the mixture policy at collection time.
  double mixture_propensity = 1.0;
  std::size_t source_policy = 0;
};

struct LoggedDataset {
  std::vector<LogEntry> entries;
  std::vector<PolicySpec> logging_specs;
  MixtureWeights weights_at_collection{std::vector<double>{1.0}};
  /// n_i: number of entries collected by logging policy i.
  std::vector<std::size_t> per_policy_counts;

  [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries.empty(); }
};

[[nodiscard]] std::vector<Context> generate_users(std::size_t n, std::size_t d, RandomSource& rng);

[[nodiscard]] double expected_reward(const RewardModel& model, const Context& x, Action a);

[[nodiscard]] double sample_reward(const RewardModel& model, const Context& x, Action a,
                                   RandomSource& rng);

/// Exact value (1/n) sum_x sum_a pi(a|x) q(x, a) of a single policy over a
/// fixed population. Throws ConfigError for an empty population.
[[nodiscard]] double true_policy_value(const PolicySpec& policy, std::span<const Context> population,
                                       const RewardModel& model);

/// Exact value of the alpha-weighted mixture of `specs`.
[[nodiscard]] double true_policy_value(std::span<const PolicySpec> specs, const MixtureWeights& w,
                                       std::span<const Context> population,
                                       const RewardModel& model);

/// Largest-remainder apportionment of w_i * n into integers summing to n.
/// Equal remainders go to the lower index.
[[nodiscard]] std::vector<std::size_t> apportion(const MixtureWeights& w, std::size_t n);

/// Logs `sample_size` users (default: the whole population) drawn without
/// replacement by a seeded shuffle. The first n_0 shuffled users are served by
/// policy 0, the next n_1 by policy 1, and so on, with n_i from apportion().
[[nodiscard]] LoggedDataset collect_logs(std::span<const PolicySpec> specs, const MixtureWeights& w,
                                         std::span<const Context> population,
                                         const RewardModel& model, RandomSource& rng,
                                         std::optional<std::size_t> sample_size = std::nullopt);

/// CSV dump, one row per entry: x_0..x_{d-1},action,reward,propensity,source_policy.
void write_dataset_csv(std::ostream& out, const LoggedDataset& data);

}  // namespace mixopt

#endif  // MIXOPT_ENVIRONMENT_HPP
