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

#include "mixopt/policies.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "mixopt/errors.hpp"

namespace mixopt {

Context::Context(std::vector<double> features) : features_{std::move(features)} {
  if (features_.empty()) {
    throw ConfigError("context must have at least one feature");
  }
  for (double v : features_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(fmt::format("context feature {} outside [0, 1]", v));
    }
  }
}

const Action Action::kNoCoupon{0, Action::Unchecked{}};
const Action Action::kCoupon{1, Action::Unchecked{}};

Action::Action(std::size_t index) : index_{index} {
  if (index >= kActionCount) {
    throw ConfigError(fmt::format("action index {} out of range", index));
  }
}

std::string_view Action::label() const noexcept {
  return index_ == 0 ? "no-coupon" : "coupon";
}

ActionDistribution::ActionDistribution(std::array<double, kActionCount> probs) : probs_{probs} {
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(fmt::format("probability {} outside [0, 1]", p));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigError(fmt::format("probabilities sum to {}, not 1", total));
  }
}

ActionDistribution ActionDistribution::one_hot(Action a) {
  std::array<double, kActionCount> probs{};
  probs[a.index()] = 1.0;
  return ActionDistribution{probs};
}

std::string_view to_string(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::kRandomFeature:
      return "random_feature";
    case PolicyKind::kThreshold:
      return "threshold";
    case PolicyKind::kThresholdComplement:
      return "threshold_complement";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (auto kind :
       {PolicyKind::kRandomFeature, PolicyKind::kThreshold, PolicyKind::kThresholdComplement}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw ConfigError(fmt::format("unknown policy kind '{}'", name));
}

void PolicySpec::validate(std::size_t dim) const {
  if (feature_index >= dim) {
    throw ConfigError(
        fmt::format("policy feature_index {} out of range for dimension {}", feature_index, dim));
  }
  if (kind != PolicyKind::kRandomFeature && !(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError(fmt::format("policy threshold {} outside [0, 1]", threshold));
  }
}

MixtureWeights::MixtureWeights(std::vector<double> alpha) : alpha_{std::move(alpha)} {
  if (alpha_.empty()) {
    throw ConfigError("mixture weights must be non-empty");
  }
  for (double a : alpha_) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ConfigError(fmt::format("mixture weight {} outside [0, 1]", a));
    }
  }
  const double total = std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw ConfigError(fmt::format("mixture weights ({}) sum to {}, not 1", fmt::join(alpha_, ", "),
                                  total));
  }
  if (total != 1.0) {
    for (double& a : alpha_) {
      a /= total;
    }
  }
}

MixtureWeights MixtureWeights::vertex(std::size_t k, std::size_t i) {
  std::vector<double> alpha(k, 0.0);
  alpha.at(i) = 1.0;
  return MixtureWeights{std::move(alpha)};
}

ActionDistribution action_probabilities(const PolicySpec& spec, const Context& x) {
  spec.validate(x.dim());
  const double phi = x[spec.feature_index];
  switch (spec.kind) {
    case PolicyKind::kRandomFeature:
      return ActionDistribution{{1.0 - phi, phi}};
    case PolicyKind::kThreshold:
      return ActionDistribution::one_hot(phi >= spec.threshold ? Action::kCoupon
                                                               : Action::kNoCoupon);
    case PolicyKind::kThresholdComplement:
      return ActionDistribution::one_hot(phi < spec.threshold ? Action::kCoupon
                                                              : Action::kNoCoupon);
  }
  throw ConfigError("unknown policy kind");
}

ActionDistribution mixture_probabilities(std::span<const PolicySpec> specs,
                                         const MixtureWeights& w, const Context& x) {
  if (specs.size() != w.size()) {
    throw ConfigError(fmt::format("{} logging policies but {} mixture weights", specs.size(),
                                  w.size()));
  }
  std::array<double, kActionCount> mixed{};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto component = action_probabilities(specs[i], x);
    for (std::size_t a = 0; a < kActionCount; ++a) {
      mixed[a] += w[i] * component.prob(a);
    }
  }
  // Rounding in the weighted sum can overshoot 1 by an ulp.
  for (double& p : mixed) {
    p = std::min(p, 1.0);
  }
  return ActionDistribution{mixed};
}

Action sample_action(const ActionDistribution& dist, RandomSource& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t a = 0; a + 1 < kActionCount; ++a) {
    cumulative += dist.prob(a);
    if (u < cumulative) {
      return Action{a};
    }
  }
  return Action{kActionCount - 1};
}

}  // namespace mixopt
