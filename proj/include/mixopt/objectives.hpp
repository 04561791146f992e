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

#ifndef MIXOPT_OBJECTIVES_HPP
#define MIXOPT_OBJECTIVES_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "mixopt/environment.hpp"
#include "mixopt/estimators.hpp"
#include "mixopt/policies.hpp"

namespace mixopt {

struct Scenario {
  std::vector<Context> population;
  std::vector<PolicySpec> logging_specs;
  EvalPolicy eval_policy{PolicySpec{}};
  RewardModel reward_model;
  std::size_t replications = 50;
  /// Users logged per replication; nullopt logs the whole population.
  std::optional<std::size_t> sample_size;
  EstimatorConfig estimator_cfg;
  std::uint64_t master_seed = 0;
  /// Worker threads for replications. Results do not depend on this value.
  std::size_t threads = 1;

  void validate() const;
  [[nodiscard]] std::size_t num_policies() const noexcept { return logging_specs.size(); }
};

/// F(alpha) = (-f_r(alpha), f_e(alpha)). ope_error is +infinity when the
/// mixture leaves an evaluation action unsupported under OverlapMode::kError.
struct ObjectiveVector {
  double neg_revenue = 0.0;
  double ope_error = 0.0;
  /// Standard error of ope_error across replications (0 when R == 1).
  double ope_error_se = 0.0;

  [[nodiscard]] double revenue() const noexcept { return -neg_revenue; }
};

struct OpeErrorReport {
  double mse = 0.0;
  double std_error = 0.0;
  double mean_estimate = 0.0;
  double max_importance_weight = 0.0;
  /// Summed over replications.
  std::size_t support_violations = 0;
  std::size_t replications = 0;
};

/// f_r(alpha): exact expected revenue of the mixture over the scenario population.
[[nodiscard]] double revenue_objective(const MixtureWeights& alpha, const Scenario& s);

/// f_e(alpha): mean over R replications of (BIPS estimate - V(pi_e))^2.
/// Replication k always uses child seed k of the scenario master seed.
[[nodiscard]] double ope_error_objective(const MixtureWeights& alpha, const Scenario& s);

[[nodiscard]] OpeErrorReport ope_error_report(const MixtureWeights& alpha, const Scenario& s);

/// Same, with V(pi_e) supplied by the caller.
[[nodiscard]] OpeErrorReport ope_error_report(const MixtureWeights& alpha, const Scenario& s,
                                              double eval_policy_value);

/// Both objectives for one scenario, with the evaluation policy value cached
/// and results memoized on alpha rounded to 1e-9. Safe for concurrent use.
class ObjectiveFunction {
 public:
  explicit ObjectiveFunction(Scenario scenario);

  ObjectiveVector operator()(const MixtureWeights& alpha);

  [[nodiscard]] const Scenario& scenario() const noexcept { return scenario_; }
  [[nodiscard]] double eval_policy_value() const noexcept { return eval_value_; }
  /// Number of evaluations that were not served from the memo.
  [[nodiscard]] std::size_t evaluations() const;

 private:
  using Key = std::vector<std::int64_t>;

  Scenario scenario_;
  double eval_value_;
  mutable std::mutex mutex_;
  std::map<Key, ObjectiveVector> memo_;
  std::size_t evaluations_ = 0;
};

/// Uncached F(alpha).
[[nodiscard]] ObjectiveVector evaluate_candidate(const MixtureWeights& alpha, const Scenario& s);

}  // namespace mixopt

#endif  // MIXOPT_OBJECTIVES_HPP
