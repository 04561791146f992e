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

#ifndef MIXOPT_POLICIES_HPP
#define MIXOPT_POLICIES_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixopt/random.hpp"

namespace mixopt {

/// Number of actions in the coupon allocation problem: 0 = no coupon, 1 = coupon.
inline constexpr std::size_t kActionCount = 2;

/// User feature vector; every component lies in [0, 1].
class Context {
 public:
  Context() = default;
  /// Throws ConfigError if the vector is empty or a component is outside [0, 1].
  explicit Context(std::vector<double> features);

  [[nodiscard]] std::size_t dim() const noexcept { return features_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return features_[i]; }
  [[nodiscard]] std::span<const double> features() const noexcept { return features_; }

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::vector<double> features_;
};

class Action {
 public:
  static const Action kNoCoupon;
  static const Action kCoupon;

  constexpr Action() = default;
  /// Throws ConfigError when index >= kActionCount.
  explicit Action(std::size_t index);

  [[nodiscard]] constexpr std::size_t index() const noexcept { return index_; }
  [[nodiscard]] std::string_view label() const noexcept;

  friend constexpr bool operator==(Action, Action) = default;

 private:
  struct Unchecked {};
  constexpr Action(std::size_t index, Unchecked) : index_{index} {}

  std::size_t index_ = 0;
};

/// Probability vector over the action set.
class ActionDistribution {
 public:
  /// Throws ConfigError unless probs are in [0, 1] and sum to 1 within 1e-12.
  explicit ActionDistribution(std::array<double, kActionCount> probs);

  static ActionDistribution one_hot(Action a);

  [[nodiscard]] double operator[](Action a) const { return probs_[a.index()]; }
  [[nodiscard]] double prob(std::size_t index) const { return probs_[index]; }
  [[nodiscard]] const std::array<double, kActionCount>& probs() const noexcept { return probs_; }

 private:
  std::array<double, kActionCount> probs_{};
};

enum class PolicyKind {
  /// Coupon with probability rho = x[feature_index].
  kRandomFeature,
  /// Coupon iff x[feature_index] >= threshold.
  kThreshold,
  /// Coupon iff x[feature_index] < threshold.
  kThresholdComplement,
};

[[nodiscard]] std::string_view to_string(PolicyKind kind) noexcept;
/// Accepts "random_feature", "threshold" and "threshold_complement".
[[nodiscard]] PolicyKind parse_policy_kind(std::string_view name);

struct PolicySpec {
  PolicyKind kind = PolicyKind::kRandomFeature;
  std::size_t feature_index = 0;
  /// Only meaningful for the threshold kinds.
  double threshold = 0.5;

  static PolicySpec random_feature(std::size_t feature_index) {
    return {PolicyKind::kRandomFeature, feature_index, 0.0};
  }
  static PolicySpec threshold_at(std::size_t feature_index, double z) {
    return {PolicyKind::kThreshold, feature_index, z};
  }
  static PolicySpec threshold_complement(std::size_t feature_index, double z) {
    return {PolicyKind::kThresholdComplement, feature_index, z};
  }

  /// Throws ConfigError if the spec cannot be applied to contexts of dimension `dim`.
  void validate(std::size_t dim) const;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

/// Mixture ratio over K logging policies; a point on the probability simplex.
class MixtureWeights {
 public:
  static constexpr double kSumTolerance = 1e-9;

  /// Throws ConfigError unless every weight is in [0, 1] and the sum is 1
  /// within 1e-9. Accepted weights are renormalized to sum to 1.
  explicit MixtureWeights(std::vector<double> alpha);

  /// The simplex vertex e_i of dimension k.
  static MixtureWeights vertex(std::size_t k, std::size_t i);

  [[nodiscard]] std::size_t size() const noexcept { return alpha_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return alpha_[i]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return alpha_; }

  friend bool operator==(const MixtureWeights&, const MixtureWeights&) = default;
  friend auto operator<=>(const MixtureWeights& a, const MixtureWeights& b) {
    return a.alpha_ <=> b.alpha_;
  }

 private:
  std::vector<double> alpha_;
};

[[nodiscard]] ActionDistribution action_probabilities(const PolicySpec& spec, const Context& x);

/// The alpha-weighted average policy: sum_i alpha_i * pi_i(. | x).
[[nodiscard]] ActionDistribution mixture_probabilities(std::span<const PolicySpec> specs,
                                                       const MixtureWeights& w, const Context& x);

[[nodiscard]] Action sample_action(const ActionDistribution& dist, RandomSource& rng);

}  // namespace mixopt

#endif  // MIXOPT_POLICIES_HPP
