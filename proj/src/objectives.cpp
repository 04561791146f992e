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

#include "mixopt/objectives.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mixopt/errors.hpp"
#include "mixopt/parallel.hpp"

namespace mixopt {

void Scenario::validate() const {
  if (population.empty()) {
    throw ConfigError("scenario population is empty");
  }
  if (logging_specs.empty()) {
    throw ConfigError("scenario needs at least one logging policy");
  }
  if (replications == 0) {
    throw ConfigError("scenario needs at least one replication");
  }
  if (sample_size && (*sample_size == 0 || *sample_size > population.size())) {
    throw ConfigError(
        fmt::format("sample size {} not in [1, {}]", *sample_size, population.size()));
  }
  const std::size_t dim = population.front().dim();
  for (const auto& spec : logging_specs) {
    spec.validate(dim);
  }
  eval_policy.spec().validate(dim);
  reward_model.validate(dim);
  estimator_cfg.validate();
}

double revenue_objective(const MixtureWeights& alpha, const Scenario& s) {
  return true_policy_value(s.logging_specs, alpha, s.population, s.reward_model);
}

OpeErrorReport ope_error_report(const MixtureWeights& alpha, const Scenario& s,
                                double eval_policy_value) {
  const std::size_t reps = s.replications;
  std::vector<WeightedEstimate> estimates(reps);
  parallel_for(reps, s.threads, [&](std::size_t k) {
    RandomSource rng{derive_seed(s.master_seed, SeedStream::kReplication, k)};
    const auto data =
        collect_logs(s.logging_specs, alpha, s.population, s.reward_model, rng, s.sample_size);
    estimates[k] = bips_diagnostics(data, s.eval_policy, s.estimator_cfg);
  });

  OpeErrorReport report;
  report.replications = reps;
  double squared_total = 0.0;
  double estimate_total = 0.0;
  for (const auto& e : estimates) {
    report.support_violations += e.support_violations;
    report.max_importance_weight = std::max(report.max_importance_weight, e.max_importance_weight);
    const double err = e.value - eval_policy_value;
    squared_total += err * err;
    estimate_total += e.value;
  }
  report.mean_estimate = estimate_total / static_cast<double>(reps);

  if (s.estimator_cfg.overlap_mode == OverlapMode::kError && report.support_violations > 0) {
    report.mse = std::numeric_limits<double>::infinity();
    report.std_error = std::numeric_limits<double>::infinity();
    return report;
  }
  report.mse = squared_total / static_cast<double>(reps);
  if (reps > 1) {
    double spread = 0.0;
    for (const auto& e : estimates) {
      const double err = e.value - eval_policy_value;
      const double dev = err * err - report.mse;
      spread += dev * dev;
    }
    report.std_error = std::sqrt(spread / static_cast<double>(reps - 1) / static_cast<double>(reps));
  }
  return report;
}

OpeErrorReport ope_error_report(const MixtureWeights& alpha, const Scenario& s) {
  return ope_error_report(
      alpha, s, true_policy_value(s.eval_policy.spec(), s.population, s.reward_model));
}

double ope_error_objective(const MixtureWeights& alpha, const Scenario& s) {
  return ope_error_report(alpha, s).mse;
}

namespace {

ObjectiveVector make_vector(const MixtureWeights& alpha, const Scenario& s, double eval_value) {
  const auto report = ope_error_report(alpha, s, eval_value);
  return ObjectiveVector{-revenue_objective(alpha, s), report.mse, report.std_error};
}

}  // namespace

ObjectiveVector evaluate_candidate(const MixtureWeights& alpha, const Scenario& s) {
  return make_vector(alpha, s,
                     true_policy_value(s.eval_policy.spec(), s.population, s.reward_model));
}

ObjectiveFunction::ObjectiveFunction(Scenario scenario)
    : scenario_{std::move(scenario)},
      eval_value_{(scenario_.validate(), true_policy_value(scenario_.eval_policy.spec(),
                                                           scenario_.population,
                                                           scenario_.reward_model))} {}

ObjectiveVector ObjectiveFunction::operator()(const MixtureWeights& alpha) {
  if (alpha.size() != scenario_.num_policies()) {
    throw ConfigError(fmt::format("expected {} mixture weights, got {}",
                                  scenario_.num_policies(), alpha.size()));
  }
  Key key;
  key.reserve(alpha.size());
  for (double a : alpha.values()) {
    key.push_back(std::llround(a * 1e9));
  }
  {
    std::lock_guard lock{mutex_};
    if (auto it = memo_.find(key); it != memo_.end()) {
      return it->second;
    }
  }
  const auto result = make_vector(alpha, scenario_, eval_value_);
  std::lock_guard lock{mutex_};
  if (memo_.insert_or_assign(std::move(key), result).second) {
    ++evaluations_;
  }
  return result;
}

std::size_t ObjectiveFunction::evaluations() const {
  std::lock_guard lock{mutex_};
  return evaluations_;
}

}  // namespace mixopt
