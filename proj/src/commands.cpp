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

#include "mixopt/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "mixopt/errors.hpp"
#include "mixopt/objectives.hpp"

#ifndef MIXOPT_VERSION
#define MIXOPT_VERSION "unknown"
#endif

namespace mixopt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& dir, std::string_view name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir.string(),
                                  ec.message()));
  }
  const fs::path path = dir / name;
  std::ofstream out{path, std::ios::binary};
  if (!out) {
    throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  }
  return out;
}

json number_or_inf(double v) {
  return std::isfinite(v) ? json(v) : json(format_number(v));
}

void write_manifest(const ExperimentConfig& cfg, const CommandOptions& opts,
                    std::string_view command, json extra) {
  json manifest{
      {"command", std::string{command}},
      {"seed", cfg.seed},
      {"config_hash", config_hash(cfg)},
      {"config", to_json(cfg)},
      {"threads", opts.threads},
      {"versions",
       {{"mixtureopt", MIXOPT_VERSION},
        {"compiler", __VERSION__},
        {"fmt", FMT_VERSION},
        {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                      NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)}}},
  };
  manifest.update(extra);
  auto out = open_output(opts.out_dir, "manifest.json");
  out << manifest.dump(2) << '\n';
}

void write_header(std::ostream& out, std::size_t k) {
  for (std::size_t i = 1; i <= k; ++i) {
    out << "alpha_" << i << ',';
  }
  out << "revenue,ope_mse,random_ratio\n";
}

void write_row(std::ostream& out, const MixtureWeights& alpha, double revenue, double ope) {
  for (double a : alpha.values()) {
    out << format_number(a) << ',';
  }
  out << format_number(revenue) << ',' << format_number(ope) << ',' << format_number(alpha[0])
      << '\n';
}

void enumerate_lattice(std::size_t k, std::size_t m, std::size_t remaining,
                       std::vector<std::size_t>& parts, std::vector<MixtureWeights>& out) {
  if (parts.size() + 1 == k) {
    parts.push_back(remaining);
    std::vector<double> alpha;
    alpha.reserve(k);
    for (std::size_t p : parts) {
      alpha.push_back(static_cast<double>(p) / static_cast<double>(m));
    }
    out.emplace_back(std::move(alpha));
    parts.pop_back();
    return;
  }
  for (std::size_t take = remaining + 1; take-- > 0;) {
    parts.push_back(take);
    enumerate_lattice(k, m, remaining - take, parts, out);
    parts.pop_back();
  }
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  return fmt::format("{}", value);
}

std::vector<MixtureWeights> simplex_lattice(std::size_t k, std::size_t m) {
  if (k == 0 || m == 0) {
    throw ConfigError("lattice needs k >= 1 and m >= 1");
  }
  std::vector<MixtureWeights> out;
  std::vector<std::size_t> parts;
  enumerate_lattice(k, m, m, parts, out);
  return out;
}

MixtureWeights parse_alpha(std::string_view text) {
  std::vector<double> alpha;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view token = text.substr(start, comma - start);
    while (!token.empty() && token.front() == ' ') {
      token.remove_prefix(1);
    }
    while (!token.empty() && token.back() == ' ') {
      token.remove_suffix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ConfigError(fmt::format("cannot parse mixture weight '{}'", token));
    }
    alpha.push_back(v);
    start = comma + 1;
  }
  return MixtureWeights{std::move(alpha)};
}

void write_trials_csv(std::ostream& out, std::span<const EvaluatedCandidate> trials) {
  write_header(out, trials.empty() ? 0 : trials.front().alpha.size());
  for (const auto& t : trials) {
    write_row(out, t.alpha, t.objectives.revenue(), t.objectives.ope_error);
  }
}

void write_frontier_csv(std::ostream& out, std::span<const ParetoPoint> frontier) {
  write_header(out, frontier.empty() ? 0 : frontier.front().alpha.size());
  for (const auto& p : frontier) {
    write_row(out, p.alpha, p.revenue, p.ope_error);
  }
}

std::vector<TrialRow> read_trials_csv(const fs::path& path) {
  std::ifstream in{path};
  if (!in) {
    throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(fmt::format("{}: missing header", path.string()));
  }
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 4) {
    throw ConfigError(fmt::format("{}:1: expected at least 4 columns", path.string()));
  }
  std::vector<TrialRow> rows;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> values;
    std::stringstream fields{line};
    std::string field;
    while (std::getline(fields, field, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ConfigError(fmt::format("{}:{}: bad number '{}'", path.string(), line_no, field));
      }
      values.push_back(v);
    }
    if (values.size() != columns) {
      throw ConfigError(fmt::format("{}:{}: expected {} columns, got {}", path.string(), line_no,
                                    columns, values.size()));
    }
    TrialRow row;
    row.alpha.assign(values.begin(), values.end() - 3);
    row.revenue = values[columns - 3];
    row.ope_mse = values[columns - 2];
    row.random_ratio = values[columns - 1];
    rows.push_back(std::move(row));
  }
  return rows;
}

NsgaResult cmd_optimize(const ExperimentConfig& cfg, const CommandOptions& opts) {
  ObjectiveFunction objective{build_scenario(cfg, opts.threads)};
  const auto moo = optimizer_config(cfg);
  spdlog::info("optimize: K={} budget={} population={} replications={}",
               cfg.logging_policies.size(), moo.evaluation_budget, moo.population_size,
               cfg.objectives.replications);
  auto result = run_nsga2([&objective](const MixtureWeights& a) { return objective(a); },
                          cfg.logging_policies.size(), moo);
  spdlog::info("optimize: {} evaluations over {} generations, {} frontier points",
               result.evaluated.size(), result.generations, result.archive.size());

  auto frontier = open_output(opts.out_dir, "frontier.csv");
  write_frontier_csv(frontier, result.archive);
  auto trials = open_output(opts.out_dir, "all_trials.csv");
  write_trials_csv(trials, result.evaluated);
  write_manifest(cfg, opts, "optimize",
                 {{"evaluations", result.evaluated.size()},
                  {"generations", result.generations},
                  {"frontier_size", result.archive.size()},
                  {"optimizer_seed", moo.seed}});
  return result;
}

std::vector<EvaluatedCandidate> cmd_sweep(const ExperimentConfig& cfg, std::size_t resolution,
                                          const CommandOptions& opts) {
  if (resolution < 2) {
    throw ConfigError(fmt::format("grid resolution must be >= 2, got {}", resolution));
  }
  ObjectiveFunction objective{build_scenario(cfg, opts.threads)};
  const auto lattice = simplex_lattice(cfg.logging_policies.size(), resolution);
  spdlog::info("sweep: {} lattice points at resolution {}", lattice.size(), resolution);
  std::vector<EvaluatedCandidate> grid;
  grid.reserve(lattice.size());
  for (const auto& alpha : lattice) {
    grid.push_back(EvaluatedCandidate{alpha, objective(alpha)});
  }
  auto out = open_output(opts.out_dir, "grid.csv");
  write_trials_csv(out, grid);
  write_manifest(cfg, opts, "sweep", {{"resolution", resolution}, {"points", grid.size()}});
  return grid;
}

json cmd_evaluate(const ExperimentConfig& cfg, const MixtureWeights& alpha,
                  const CommandOptions& opts) {
  const Scenario s = build_scenario(cfg, opts.threads);
  if (alpha.size() != s.num_policies()) {
    throw ConfigError(fmt::format("alpha has {} weights but the scenario has {} logging policies",
                                  alpha.size(), s.num_policies()));
  }
  const double eval_value = true_policy_value(s.eval_policy.spec(), s.population, s.reward_model);
  const auto report = ope_error_report(alpha, s, eval_value);
  json per_policy = json::array();
  for (std::size_t i = 0; i < s.num_policies(); ++i) {
    per_policy.push_back(revenue_objective(MixtureWeights::vertex(s.num_policies(), i), s));
  }
  return json{
      {"alpha", std::vector<double>(alpha.values().begin(), alpha.values().end())},
      {"revenue", revenue_objective(alpha, s)},
      {"ope_mse", number_or_inf(report.mse)},
      {"ope_mse_std_error", number_or_inf(report.std_error)},
      {"eval_policy_value", eval_value},
      {"mean_estimate", report.mean_estimate},
      {"policy_revenues", per_policy},
      {"diagnostics",
       {{"max_importance_weight", report.max_importance_weight},
        {"support_violations", report.support_violations},
        {"replications", report.replications},
        {"overlap_mode", s.estimator_cfg.overlap_mode == OverlapMode::kError ? "error" : "clip"}}},
      {"seed", cfg.seed},
      {"config_hash", config_hash(cfg)},
  };
}

LoggedDataset cmd_simulate(const ExperimentConfig& cfg, const MixtureWeights& alpha,
                           const CommandOptions& opts) {
  const Scenario s = build_scenario(cfg, opts.threads);
  RandomSource rng{derive_seed(cfg.seed, SeedStream::kSimulation)};
  auto data = collect_logs(s.logging_specs, alpha, s.population, s.reward_model, rng,
                           s.sample_size);
  auto out = open_output(opts.out_dir, "dataset.csv");
  write_dataset_csv(out, data);
  write_manifest(cfg, opts, "simulate",
                 {{"alpha", std::vector<double>(alpha.values().begin(), alpha.values().end())},
                  {"entries", data.size()}});
  return data;
}

}  // namespace mixopt
