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

#include "mixopt/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "mixopt/errors.hpp"

namespace mixopt {

void RewardModel::validate(std::size_t dim) const {
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw ConfigError(fmt::format("noise_std must be finite and >= 0, got {}", noise_std));
  }
  if (uplift_weights.size() != dim) {
    throw ConfigError(fmt::format("reward model has {} uplift weights for dimension {}",
                                  uplift_weights.size(), dim));
  }
  if (!std::isfinite(base_weight) || !std::isfinite(coupon_cost) ||
      !std::all_of(uplift_weights.begin(), uplift_weights.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw ConfigError("reward model coefficients must be finite");
  }
}

std::vector<Context> generate_users(std::size_t n, std::size_t d, RandomSource& rng) {
  if (n == 0 || d == 0) {
    throw ConfigError("population size and dimension must be positive");
  }
  std::vector<Context> users;
  users.reserve(n);
  std::vector<double> features(d);
  for (std::size_t j = 0; j < n; ++j) {
    for (double& f : features) {
      f = rng.uniform();
    }
    users.emplace_back(features);
  }
  return users;
}

double expected_reward(const RewardModel& model, const Context& x, Action a) {
  const double baseline = model.base_weight * x[x.dim() - 1];
  if (a == Action::kNoCoupon) {
    return baseline;
  }
  double uplift = 0.0;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    uplift += model.uplift_weights[k] * x[k];
  }
  return baseline + uplift - model.coupon_cost;
}

double sample_reward(const RewardModel& model, const Context& x, Action a, RandomSource& rng) {
  const double mean = expected_reward(model, x, a);
  if (model.noise_std == 0.0) {
    return mean;
  }
  return rng.normal(mean, model.noise_std);
}

namespace {

template <class PolicyFn>
double population_value(std::span<const Context> population, const RewardModel& model,
                        PolicyFn&& policy) {
  if (population.empty()) {
    throw ConfigError("policy value needs a non-empty population");
  }
  double total = 0.0;
  for (const auto& x : population) {
    const ActionDistribution dist = policy(x);
    double value = 0.0;
    for (std::size_t a = 0; a < kActionCount; ++a) {
      value += dist.prob(a) * expected_reward(model, x, Action{a});
    }
    total += value;
  }
  return total / static_cast<double>(population.size());
}

}  // namespace

double true_policy_value(const PolicySpec& policy, std::span<const Context> population,
                         const RewardModel& model) {
  return population_value(population, model,
                          [&](const Context& x) { return action_probabilities(policy, x); });
}

double true_policy_value(std::span<const PolicySpec> specs, const MixtureWeights& w,
                         std::span<const Context> population, const RewardModel& model) {
  return population_value(population, model,
                          [&](const Context& x) { return mixture_probabilities(specs, w, x); });
}

std::vector<std::size_t> apportion(const MixtureWeights& w, std::size_t n) {
  std::vector<std::size_t> counts(w.size());
  std::vector<double> remainders(w.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double quota = w[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(quota));
    remainders[i] = quota - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t r = 0; assigned < n; r = (r + 1) % order.size()) {
    ++counts[order[r]];
    ++assigned;
  }
  return counts;
}

LoggedDataset collect_logs(std::span<const PolicySpec> specs, const MixtureWeights& w,
                           std::span<const Context> population, const RewardModel& model,
                           RandomSource& rng, std::optional<std::size_t> sample_size) {
  if (population.empty()) {
    throw ConfigError("cannot collect logs from an empty population");
  }
  if (specs.size() != w.size()) {
    throw ConfigError(fmt::format("{} logging policies but {} mixture weights", specs.size(),
                                  w.size()));
  }
  const std::size_t dim = population.front().dim();
  for (const auto& spec : specs) {
    spec.validate(dim);
  }
  const std::size_t n = sample_size.value_or(population.size());
  if (n == 0 || n > population.size()) {
    throw ConfigError(fmt::format("sample size {} not in [1, {}]", n, population.size()));
  }

  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine());

  LoggedDataset data;
  data.logging_specs.assign(specs.begin(), specs.end());
  data.weights_at_collection = w;
  data.per_policy_counts = apportion(w, n);
  data.entries.reserve(n);

  std::size_t slot = 0;
  for (std::size_t policy = 0; policy < specs.size(); ++policy) {
    for (std::size_t c = 0; c < data.per_policy_counts[policy]; ++c, ++slot) {
      const Context& x = population[order[slot]];
      const Action a = sample_action(action_probabilities(specs[policy], x), rng);
      const double propensity = mixture_probabilities(specs, w, x)[a];
      if (!(propensity > 0.0)) {
        throw std::logic_error("logged an action with zero mixture propensity");
      }
      data.entries.push_back(LogEntry{x, a, sample_reward(model, x, a, rng), propensity, policy});
    }
  }
  return data;
}

void write_dataset_csv(std::ostream& out, const LoggedDataset& data) {
  const std::size_t dim = data.empty() ? 0 : data.entries.front().context.dim();
  for (std::size_t k = 0; k < dim; ++k) {
    out << "x_" << k << ',';
  }
  out << "action,reward,propensity,source_policy\n";
  for (const auto& e : data.entries) {
    for (double f : e.context.features()) {
      out << fmt::format("{}", f) << ',';
    }
    out << fmt::format("{},{},{},{}\n", e.action.index(), e.reward, e.mixture_propensity,
                       e.source_policy);
  }
}

}  // namespace mixopt
