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

#ifndef MIXOPT_CONFIG_HPP
#define MIXOPT_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixopt/environment.hpp"
#include "mixopt/estimators.hpp"
#include "mixopt/nsga2.hpp"
#include "mixopt/objectives.hpp"
#include "mixopt/policies.hpp"

namespace mixopt {

struct PopulationConfig {
  std::size_t size = 10000;
  std::size_t dim = 4;
};

struct ObjectivesConfig {
  std::size_t replications = 50;
  std::optional<std::size_t> sample_size;
  OverlapMode overlap_mode = OverlapMode::kError;
  double clip_floor = 1e-3;
};

/// Everything needed to reproduce one experiment. The moo seed field is
/// ignored; the optimizer seed is derived from `seed`.
struct ExperimentConfig {
  std::uint64_t seed = 20240901;
  PopulationConfig population;
  RewardModel reward_model;
  std::vector<PolicySpec> logging_policies;
  PolicySpec eval_policy;
  ObjectivesConfig objectives;
  MooConfig moo;

  void validate() const;
};

/// The default coupon scenario: d = 4, a random logger on feature 0 and
/// threshold loggers on features 1 and 2, evaluation policy Threshold(1, 0.5).
[[nodiscard]] ExperimentConfig default_config();

/// The default scenario with the evaluation policy ThresholdComplement(1, 0.5).
[[nodiscard]] ExperimentConfig negative_eval_config();

/// Missing keys keep their defaults; unknown keys and bad values raise ConfigError.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& cfg);

/// SHA-256 of the canonical JSON serialization, as lowercase hex.
[[nodiscard]] std::string config_hash(const ExperimentConfig& cfg);

/// Draws the population from the master seed and assembles the scenario.
[[nodiscard]] Scenario build_scenario(const ExperimentConfig& cfg, std::size_t threads = 1);

/// Optimizer settings with the seed derived from the master seed.
[[nodiscard]] MooConfig optimizer_config(const ExperimentConfig& cfg);

}  // namespace mixopt

#endif  // MIXOPT_CONFIG_HPP
