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

#ifndef MIXOPT_ESTIMATORS_HPP
#define MIXOPT_ESTIMATORS_HPP

#include <cstddef>

#include "mixopt/environment.hpp"
#include "mixopt/policies.hpp"

namespace mixopt {

enum class OverlapMode {
  /// Any evaluation action without logging support raises SupportViolation.
  kError,
  /// Propensities are floored at clip_floor; unsupported actions are ignored.
  kClip,
};

struct EstimatorConfig {
  OverlapMode overlap_mode = OverlapMode::kError;
  double clip_floor = 1e-3;
  /// Recompute each logged propensity from the recorded specs and throw
  /// ConfigError if it disagrees with the log by more than 1e-12.
  bool verify_propensities = false;

  void validate() const;
};

/// Evaluation policy pi_e together with its deterministic selector h_e.
class EvalPolicy {
 public:
  explicit EvalPolicy(PolicySpec spec) : spec_{spec} {}

  [[nodiscard]] const PolicySpec& spec() const noexcept { return spec_; }
  [[nodiscard]] ActionDistribution probabilities(const Context& x) const {
    return action_probabilities(spec_, x);
  }
  /// argmax_a pi_e(a|x); ties go to the lowest action index.
  [[nodiscard]] Action select(const Context& x) const;

 private:
  PolicySpec spec_;
};

/// Weighted estimate plus the overlap diagnostics gathered in the same pass.
struct WeightedEstimate {
  double value = 0.0;
  double max_importance_weight = 0.0;
  /// Entries whose context has an action with pi_e > 0 but zero logging support.
  std::size_t support_violations = 0;
};

/// pi_e(a|x) / propensity, with the propensity floored at clip_floor in Clip mode.
[[nodiscard]] double importance_weight(double eval_prob, double propensity,
                                       const EstimatorConfig& cfg) noexcept;

/// Mean reward over entries whose logged action equals h_e(x).
/// Throws NoMatchingSamples when no entry matches.
[[nodiscard]] double naive_estimate(const LoggedDataset& data, const EvalPolicy& eval);

/// Single-logger inverse propensity score estimate. Throws ConfigError unless
/// the data was collected by exactly one policy.
[[nodiscard]] double ips_estimate(const LoggedDataset& data, const EvalPolicy& eval,
                                  const EstimatorConfig& cfg);

/// Balanced IPS over data pooled from K logging policies; the denominator is
/// the logged mixture propensity.
[[nodiscard]] double bips_estimate(const LoggedDataset& data, const EvalPolicy& eval,
                                   const EstimatorConfig& cfg);

/// BIPS without the Error-mode throw. Callers inspect support_violations.
[[nodiscard]] WeightedEstimate bips_diagnostics(const LoggedDataset& data, const EvalPolicy& eval,
                                                const EstimatorConfig& cfg);

}  // namespace mixopt

#endif  // MIXOPT_ESTIMATORS_HPP
