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

// Command-line entry point: optimize, sweep, evaluate and simulate.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "mixopt/commands.hpp"
#include "mixopt/config.hpp"
#include "mixopt/errors.hpp"

namespace {

constexpr int kConfigErrorExit = 2;
constexpr int kObjectiveFailureExit = 3;

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("mixtureopt");
  logger->set_level(spdlog::level::warn);
  if (const char* level = std::getenv("MIXTUREOPT_LOG")) {
    logger->set_level(spdlog::level::from_str(level));
  }
  spdlog::set_default_logger(std::move(logger));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixture-ratio optimizer for coupon logging policies"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario config (JSON); defaults to the built-in scenario")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--seed", seed, "Master seed (overrides the config)");
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* optimize = app.add_subcommand("optimize", "Run NSGA-II over the mixture simplex");
  add_common(optimize);

  std::size_t resolution = 20;
  auto* sweep = app.add_subcommand("sweep", "Evaluate the objectives on a simplex lattice");
  add_common(sweep);
  sweep->add_option("--resolution,-m", resolution, "Lattice resolution m (alpha_i = k_i / m)");

  std::string alpha_text;
  auto* evaluate = app.add_subcommand("evaluate", "Report objectives and diagnostics at one alpha");
  add_common(evaluate);
  evaluate->add_option("--alpha", alpha_text, "Comma-separated mixture ratio")->required();

  auto* simulate = app.add_subcommand("simulate", "Dump one logged dataset as CSV");
  add_common(simulate);
  simulate->add_option("--alpha", alpha_text, "Comma-separated mixture ratio")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigErrorExit;
  }

  configure_logging();

  try {
    auto cfg = config_path.empty() ? mixopt::default_config() : mixopt::load_config(config_path);
    if (seed) {
      cfg.seed = *seed;
    }
    const mixopt::CommandOptions opts{out_dir, threads};

    if (*optimize) {
      const auto result = mixopt::cmd_optimize(cfg, opts);
      std::cout << "frontier points: " << result.archive.size()
                << ", evaluations: " << result.evaluated.size() << '\n';
    } else if (*sweep) {
      const auto grid = mixopt::cmd_sweep(cfg, resolution, opts);
      std::cout << "lattice points: " << grid.size() << '\n';
    } else if (*evaluate) {
      std::cout << mixopt::cmd_evaluate(cfg, mixopt::parse_alpha(alpha_text), opts).dump(2)
                << '\n';
    } else if (*simulate) {
      const auto data = mixopt::cmd_simulate(cfg, mixopt::parse_alpha(alpha_text), opts);
      std::cout << "logged entries: " << data.size() << '\n';
    }
  } catch (const mixopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const mixopt::ObjectiveFailure& e) {
    std::cerr << "objective failure: " << e.what() << '\n';
    return kObjectiveFailureExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kObjectiveFailureExit;
  }
  return 0;
}
