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

#ifndef MIXOPT_COMMANDS_HPP
#define MIXOPT_COMMANDS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixopt/config.hpp"
#include "mixopt/nsga2.hpp"

namespace mixopt {

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  std::size_t threads = 1;
};

/// One row of frontier.csv, all_trials.csv or grid.csv.
struct TrialRow {
  std::vector<double> alpha;
  double revenue = 0.0;
  double ope_mse = 0.0;
  double random_ratio = 0.0;
};

/// Runs NSGA-II and writes frontier.csv, all_trials.csv and manifest.json.
NsgaResult cmd_optimize(const ExperimentConfig& cfg, const CommandOptions& opts);

/// Evaluates F on the simplex lattice of resolution m and writes grid.csv and
/// manifest.json.
std::vector<EvaluatedCandidate> cmd_sweep(const ExperimentConfig& cfg, std::size_t resolution,
                                          const CommandOptions& opts);

/// Structured single-point report: objectives, per-policy revenues and
/// estimator diagnostics. Non-finite numbers are rendered as the string "inf".
nlohmann::json cmd_evaluate(const ExperimentConfig& cfg, const MixtureWeights& alpha,
                            const CommandOptions& opts);

/// Collects one dataset under alpha and writes dataset.csv.
LoggedDataset cmd_simulate(const ExperimentConfig& cfg, const MixtureWeights& alpha,
                           const CommandOptions& opts);

/// All alpha with alpha_i = k_i / m and sum k_i = m, in lexicographic order of
/// k descending from (m, 0, ..., 0).
[[nodiscard]] std::vector<MixtureWeights> simplex_lattice(std::size_t k, std::size_t m);

/// Parses "a,b,c" into mixture weights; throws ConfigError.
[[nodiscard]] MixtureWeights parse_alpha(std::string_view text);

/// Column contract: alpha_1..alpha_K,revenue,ope_mse,random_ratio.
void write_trials_csv(std::ostream& out, std::span<const EvaluatedCandidate> trials);
void write_frontier_csv(std::ostream& out, std::span<const ParetoPoint> frontier);
[[nodiscard]] std::vector<TrialRow> read_trials_csv(const std::filesystem::path& path);

/// Shortest round-trip text for a double; infinities print as "inf".
[[nodiscard]] std::string format_number(double value);

}  // namespace mixopt

#endif  // MIXOPT_COMMANDS_HPP
