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

#include "mixopt/config.hpp"

#include <array>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "mixopt/errors.hpp"

namespace mixopt {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                std::string_view section) {
  if (!obj.is_object()) {
    throw ConfigError(fmt::format("'{}' must be an object", section));
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(fmt::format("unknown key '{}' in '{}'", key, section));
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    out = it->template get<T>();
  }
}

std::size_t read_count(const json& obj, const char* key, std::size_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return fallback;
  }
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw ConfigError(fmt::format("'{}' must be a nonnegative integer", key));
  }
  return it->get<std::size_t>();
}

PolicySpec parse_policy(const json& obj, std::string_view section) {
  check_keys(obj, {"kind", "feature_index", "threshold"}, section);
  if (!obj.contains("kind")) {
    throw ConfigError(fmt::format("'{}' needs a 'kind'", section));
  }
  PolicySpec spec;
  spec.kind = parse_policy_kind(obj.at("kind").get<std::string>());
  spec.feature_index = read_count(obj, "feature_index", 0);
  spec.threshold = spec.kind == PolicyKind::kRandomFeature ? 0.0 : 0.5;
  read(obj, "threshold", spec.threshold);
  return spec;
}

json policy_json(const PolicySpec& spec) {
  json out{{"kind", std::string{to_string(spec.kind)}}, {"feature_index", spec.feature_index}};
  if (spec.kind != PolicyKind::kRandomFeature) {
    out["threshold"] = spec.threshold;
  }
  return out;
}

OverlapMode parse_overlap(const std::string& name) {
  if (name == "error") {
    return OverlapMode::kError;
  }
  if (name == "clip") {
    return OverlapMode::kClip;
  }
  throw ConfigError(fmt::format("overlap_mode must be 'error' or 'clip', got '{}'", name));
}

ExperimentConfig parse_unchecked(const json& doc) {
  check_keys(doc,
             {"seed", "population", "reward_model", "logging_policies", "eval_policy",
              "objectives", "moo"},
             "config");
  ExperimentConfig cfg = default_config();
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
      throw ConfigError("'seed' must be a nonnegative integer");
    }
    cfg.seed = it->get<std::uint64_t>();
  }
  if (auto it = doc.find("population"); it != doc.end()) {
    check_keys(*it, {"size", "dim"}, "population");
    cfg.population.size = read_count(*it, "size", cfg.population.size);
    cfg.population.dim = read_count(*it, "dim", cfg.population.dim);
  }
  if (auto it = doc.find("reward_model"); it != doc.end()) {
    check_keys(*it, {"base_weight", "uplift_weights", "coupon_cost", "noise_std"}, "reward_model");
    read(*it, "base_weight", cfg.reward_model.base_weight);
    read(*it, "uplift_weights", cfg.reward_model.uplift_weights);
    read(*it, "coupon_cost", cfg.reward_model.coupon_cost);
    read(*it, "noise_std", cfg.reward_model.noise_std);
  }
  if (auto it = doc.find("logging_policies"); it != doc.end()) {
    if (!it->is_array()) {
      throw ConfigError("'logging_policies' must be an array");
    }
    cfg.logging_policies.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      cfg.logging_policies.push_back(
          parse_policy((*it)[i], fmt::format("logging_policies[{}]", i)));
    }
  }
  if (auto it = doc.find("eval_policy"); it != doc.end()) {
    cfg.eval_policy = parse_policy(*it, "eval_policy");
  }
  if (auto it = doc.find("objectives"); it != doc.end()) {
    check_keys(*it, {"replications", "sample_size", "overlap_mode", "clip_floor"}, "objectives");
    auto& o = cfg.objectives;
    o.replications = read_count(*it, "replications", o.replications);
    if (auto n = it->find("sample_size"); n != it->end()) {
      o.sample_size = n->is_null() ? std::nullopt
                                   : std::optional<std::size_t>{read_count(*it, "sample_size", 0)};
    }
    if (auto mode = it->find("overlap_mode"); mode != it->end()) {
      o.overlap_mode = parse_overlap(mode->get<std::string>());
    }
    read(*it, "clip_floor", o.clip_floor);
  }
  if (auto it = doc.find("moo"); it != doc.end()) {
    check_keys(*it,
               {"population_size", "evaluation_budget", "crossover_prob", "mutation_prob",
                "sbx_eta", "mutation_eta", "stall_generations"},
               "moo");
    auto& m = cfg.moo;
    m.population_size = read_count(*it, "population_size", m.population_size);
    m.evaluation_budget = read_count(*it, "evaluation_budget", m.evaluation_budget);
    m.stall_generations = read_count(*it, "stall_generations", m.stall_generations);
    read(*it, "crossover_prob", m.crossover_prob);
    if (auto p = it->find("mutation_prob"); p != it->end()) {
      m.mutation_prob = p->is_null() ? -1.0 : p->get<double>();
      if (!p->is_null() && m.mutation_prob < 0.0) {
        throw ConfigError("mutation_prob must be in [0, 1] or null");
      }
    }
    read(*it, "sbx_eta", m.sbx_eta);
    read(*it, "mutation_eta", m.mutation_eta);
  }
  return cfg;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (population.size == 0 || population.dim == 0) {
    throw ConfigError("population size and dimension must be positive");
  }
  if (logging_policies.empty()) {
    throw ConfigError("at least one logging policy is required");
  }
  for (const auto& spec : logging_policies) {
    spec.validate(population.dim);
  }
  eval_policy.validate(population.dim);
  reward_model.validate(population.dim);
  if (objectives.replications == 0) {
    throw ConfigError("replications must be positive");
  }
  if (objectives.sample_size &&
      (*objectives.sample_size == 0 || *objectives.sample_size > population.size)) {
    throw ConfigError(fmt::format("sample_size {} not in [1, {}]", *objectives.sample_size,
                                  population.size));
  }
  EstimatorConfig{objectives.overlap_mode, objectives.clip_floor}.validate();
  moo.validate();
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.reward_model = RewardModel{1.0, {0.0, 0.6, 0.4, 0.0}, 0.25, 0.1};
  cfg.logging_policies = {PolicySpec::random_feature(0), PolicySpec::threshold_at(1, 0.5),
                          PolicySpec::threshold_at(2, 0.5)};
  cfg.eval_policy = PolicySpec::threshold_at(1, 0.5);
  return cfg;
}

ExperimentConfig negative_eval_config() {
  ExperimentConfig cfg = default_config();
  cfg.eval_policy = PolicySpec::threshold_complement(1, 0.5);
  return cfg;
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  try {
    cfg = parse_unchecked(doc);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in{path};
  if (!in) {
    throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json policies = json::array();
  for (const auto& spec : cfg.logging_policies) {
    policies.push_back(policy_json(spec));
  }
  const auto& o = cfg.objectives;
  const auto& m = cfg.moo;
  return json{
      {"seed", cfg.seed},
      {"population", {{"size", cfg.population.size}, {"dim", cfg.population.dim}}},
      {"reward_model",
       {{"base_weight", cfg.reward_model.base_weight},
        {"uplift_weights", cfg.reward_model.uplift_weights},
        {"coupon_cost", cfg.reward_model.coupon_cost},
        {"noise_std", cfg.reward_model.noise_std}}},
      {"logging_policies", policies},
      {"eval_policy", policy_json(cfg.eval_policy)},
      {"objectives",
       {{"replications", o.replications},
        {"sample_size", o.sample_size ? json(*o.sample_size) : json(nullptr)},
        {"overlap_mode", o.overlap_mode == OverlapMode::kError ? "error" : "clip"},
        {"clip_floor", o.clip_floor}}},
      {"moo",
       {{"population_size", m.population_size},
        {"evaluation_budget", m.evaluation_budget},
        {"crossover_prob", m.crossover_prob},
        {"mutation_prob", m.mutation_prob < 0.0 ? json(nullptr) : json(m.mutation_prob)},
        {"sbx_eta", m.sbx_eta},
        {"mutation_eta", m.mutation_eta},
        {"stall_generations", m.stall_generations}}},
  };
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string canonical = to_json(cfg).dump();
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), digest.data(), &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex += fmt::format("{:02x}", digest[i]);
  }
  return hex;
}

Scenario build_scenario(const ExperimentConfig& cfg, std::size_t threads) {
  cfg.validate();
  RandomSource rng{derive_seed(cfg.seed, SeedStream::kPopulation)};
  Scenario s;
  s.population = generate_users(cfg.population.size, cfg.population.dim, rng);
  s.logging_specs = cfg.logging_policies;
  s.eval_policy = EvalPolicy{cfg.eval_policy};
  s.reward_model = cfg.reward_model;
  s.replications = cfg.objectives.replications;
  s.sample_size = cfg.objectives.sample_size;
  s.estimator_cfg = EstimatorConfig{cfg.objectives.overlap_mode, cfg.objectives.clip_floor};
  s.master_seed = cfg.seed;
  s.threads = threads;
  return s;
}

MooConfig optimizer_config(const ExperimentConfig& cfg) {
  MooConfig m = cfg.moo;
  m.seed = derive_seed(cfg.seed, SeedStream::kOptimizer);
  return m;
}

}  // namespace mixopt
