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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mixopt/config.hpp"
#include "mixopt/errors.hpp"
#include "mixopt/objectives.hpp"

namespace {

using mixopt::MixtureWeights;
using mixopt::OverlapMode;
using mixopt::PolicySpec;
using mixopt::RandomSource;
using mixopt::Scenario;

Scenario small_scenario(PolicySpec eval = PolicySpec::threshold_at(1, 0.5),
                        std::size_t population = 2000, std::size_t reps = 20) {
  auto cfg = mixopt::default_config();
  cfg.population.size = population;
  cfg.objectives.replications = reps;
  cfg.eval_policy = eval;
  return mixopt::build_scenario(cfg);
}

MixtureWeights random_weights(RandomSource& rng, std::size_t k) {
  std::vector<double> g(k);
  double total = 0.0;
  for (double& v : g) {
    v = rng.uniform();
    total += v;
  }
  for (double& v : g) {
    v /= total;
  }
  return MixtureWeights{g};
}

TEST(RevenueObjective, VertexMatchesSinglePolicy) {
  const auto s = small_scenario();
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(mixopt::revenue_objective(MixtureWeights::vertex(3, i), s),
              mixopt::true_policy_value(s.logging_specs[i], s.population, s.reward_model));
  }
}

TEST(RevenueObjective, AffineInAlpha) {
  const auto s = small_scenario();
  std::vector<double> vertex_values;
  for (std::size_t i = 0; i < 3; ++i) {
    vertex_values.push_back(mixopt::revenue_objective(MixtureWeights::vertex(3, i), s));
  }
  RandomSource rng{40};
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = random_weights(rng, 3);
    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      expected += w[i] * vertex_values[i];
    }
    EXPECT_NEAR(mixopt::revenue_objective(w, s), expected, 1e-12);
  }
}

TEST(RevenueObjective, ThresholdMixBeatsRandomOnDefaultScenario) {
  const auto s = mixopt::build_scenario(mixopt::default_config());
  ASSERT_EQ(s.population.size(), 10000u);
  // Brute force: enumerate users and actions directly.
  double random_value = 0.0;
  double threshold_value = 0.0;
  for (const auto& x : s.population) {
    const double q0 = mixopt::expected_reward(s.reward_model, x, mixopt::Action::kNoCoupon);
    const double q1 = mixopt::expected_reward(s.reward_model, x, mixopt::Action::kCoupon);
    random_value += (1.0 - x[0]) * q0 + x[0] * q1;
    threshold_value += 0.5 * (x[1] >= 0.5 ? q1 : q0) + 0.5 * (x[2] >= 0.5 ? q1 : q0);
  }
  random_value /= 10000.0;
  threshold_value /= 10000.0;
  const double random_only = mixopt::revenue_objective(MixtureWeights{{1.0, 0.0, 0.0}}, s);
  const double threshold_mix = mixopt::revenue_objective(MixtureWeights{{0.0, 0.5, 0.5}}, s);
  EXPECT_NEAR(random_only, random_value, 1e-12);
  EXPECT_NEAR(threshold_mix, threshold_value, 1e-12);
  EXPECT_GT(threshold_mix, random_only);

  double previous = -std::numeric_limits<double>::infinity();
  for (int step = 0; step <= 20; ++step) {
    const double t = step / 20.0;
    const double value =
        mixopt::revenue_objective(MixtureWeights{{1.0 - t, 0.5 * t, 0.5 * t}}, s);
    EXPECT_GE(value, previous - 1e-15);
    previous = value;
  }
}

TEST(OpeErrorObjective, SelfEvaluationWithoutNoiseIsZero) {
  auto s = small_scenario(PolicySpec::threshold_at(1, 0.5));
  s.reward_model.noise_std = 0.0;
  const double err = mixopt::ope_error_objective(MixtureWeights{{0.0, 1.0, 0.0}}, s);
  EXPECT_GE(err, 0.0);
  EXPECT_LE(err, 1e-24);
}

TEST(OpeErrorObjective, SingleReplicationIsOneSquaredDeviation) {
  auto s = small_scenario(PolicySpec::threshold_at(1, 0.5), 2000, 1);
  const MixtureWeights w{{0.4, 0.3, 0.3}};
  RandomSource rng{mixopt::derive_seed(s.master_seed, mixopt::SeedStream::kReplication, 0)};
  const auto data = mixopt::collect_logs(s.logging_specs, w, s.population, s.reward_model, rng);
  const double estimate = mixopt::bips_estimate(data, s.eval_policy, s.estimator_cfg);
  const double truth = mixopt::true_policy_value(s.eval_policy.spec(), s.population,
                                                 s.reward_model);
  EXPECT_EQ(mixopt::ope_error_objective(w, s), (estimate - truth) * (estimate - truth));
}

TEST(OpeErrorObjective, NegativeEvalPrefersRandomLogger) {
  auto s = small_scenario(PolicySpec::threshold_complement(1, 0.5), 2000, 200);
  s.estimator_cfg = mixopt::EstimatorConfig{OverlapMode::kClip, 1e-3};
  const auto random_only = mixopt::ope_error_report(MixtureWeights{{1.0, 0.0, 0.0}}, s);
  const auto mostly_threshold = mixopt::ope_error_report(MixtureWeights{{0.02, 0.49, 0.49}}, s);
  EXPECT_LT(random_only.mse, mostly_threshold.mse);
}

TEST(OpeErrorObjective, UnsupportedMixtureIsInfinite) {
  const auto s = small_scenario(PolicySpec::threshold_complement(1, 0.5));
  const auto report = mixopt::ope_error_report(MixtureWeights{{0.0, 1.0, 0.0}}, s);
  EXPECT_TRUE(std::isinf(report.mse));
  EXPECT_GT(report.support_violations, 0u);
}

TEST(OpeErrorObjective, ParallelReplicationsMatchSequential) {
  auto s = small_scenario(PolicySpec::threshold_at(1, 0.5), 2000, 16);
  const MixtureWeights w{{0.3, 0.3, 0.4}};
  const auto sequential = mixopt::ope_error_report(w, s);
  s.threads = 4;
  const auto parallel = mixopt::ope_error_report(w, s);
  EXPECT_EQ(sequential.mse, parallel.mse);
  EXPECT_EQ(sequential.std_error, parallel.std_error);
  EXPECT_EQ(sequential.mean_estimate, parallel.mean_estimate);
}

TEST(EvaluateCandidate, SignConventionAndFiniteness) {
  const auto s = small_scenario();
  const MixtureWeights w{{1.0, 0.0, 0.0}};
  const auto v = mixopt::evaluate_candidate(w, s);
  EXPECT_EQ(v.neg_revenue, -mixopt::revenue_objective(w, s));
  EXPECT_TRUE(std::isfinite(v.neg_revenue));
  EXPECT_TRUE(std::isfinite(v.ope_error));
  EXPECT_GE(v.ope_error, 0.0);
}

TEST(ObjectiveFunction, MemoizesAndIsDeterministic) {
  mixopt::ObjectiveFunction f{small_scenario()};
  const MixtureWeights w{{0.2, 0.5, 0.3}};
  const auto first = f(w);
  const auto second = f(w);
  EXPECT_EQ(first.neg_revenue, second.neg_revenue);
  EXPECT_EQ(first.ope_error, second.ope_error);
  EXPECT_EQ(f.evaluations(), 1u);

  const auto fresh = mixopt::evaluate_candidate(w, f.scenario());
  EXPECT_EQ(first.neg_revenue, fresh.neg_revenue);
  EXPECT_EQ(first.ope_error, fresh.ope_error);

  (void)f(MixtureWeights{{0.2 + 1e-12, 0.5 - 1e-12, 0.3}});
  EXPECT_EQ(f.evaluations(), 1u);
  (void)f(MixtureWeights{{0.3, 0.4, 0.3}});
  EXPECT_EQ(f.evaluations(), 2u);
}

TEST(ObjectiveFunction, RejectsWrongDimension) {
  mixopt::ObjectiveFunction f{small_scenario()};
  EXPECT_THROW((void)f(MixtureWeights{{0.5, 0.5}}), mixopt::ConfigError);
}

TEST(Scenario, Validation) {
  auto s = small_scenario();
  s.replications = 0;
  EXPECT_THROW(s.validate(), mixopt::ConfigError);
  s = small_scenario();
  s.logging_specs.clear();
  EXPECT_THROW(s.validate(), mixopt::ConfigError);
  s = small_scenario();
  s.sample_size = s.population.size() + 1;
  EXPECT_THROW(s.validate(), mixopt::ConfigError);
  s = small_scenario();
  s.population.clear();
  EXPECT_THROW(s.validate(), mixopt::ConfigError);
}

}  // namespace
