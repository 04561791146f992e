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

#include "mixopt/estimators.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mixopt/errors.hpp"

namespace mixopt {

void EstimatorConfig::validate() const {
  if (!(clip_floor > 0.0 && clip_floor < 1.0)) {
    throw ConfigError(fmt::format("clip_floor must lie in (0, 1), got {}", clip_floor));
  }
}

Action EvalPolicy::select(const Context& x) const {
  const auto dist = probabilities(x);
  std::size_t best = 0;
  for (std::size_t a = 1; a < kActionCount; ++a) {
    if (dist.prob(a) > dist.prob(best)) {
      best = a;
    }
  }
  return Action{best};
}

double importance_weight(double eval_prob, double propensity, const EstimatorConfig& cfg) noexcept {
  if (eval_prob == 0.0) {
    return 0.0;
  }
  const double denominator =
      cfg.overlap_mode == OverlapMode::kClip ? std::max(propensity, cfg.clip_floor) : propensity;
  return eval_prob / denominator;
}

double naive_estimate(const LoggedDataset& data, const EvalPolicy& eval) {
  double mean = 0.0;
  std::size_t matches = 0;
  for (const auto& e : data.entries) {
    if (eval.select(e.context) == e.action) {
      ++matches;
      mean += (e.reward - mean) / static_cast<double>(matches);
    }
  }
  if (matches == 0) {
    throw NoMatchingSamples(
        fmt::format("none of {} logged actions match the evaluation policy", data.size()));
  }
  return mean;
}

WeightedEstimate bips_diagnostics(const LoggedDataset& data, const EvalPolicy& eval,
                                  const EstimatorConfig& cfg) {
  cfg.validate();
  if (data.empty()) {
    throw ConfigError("cannot estimate a policy value from an empty dataset");
  }
  const bool check_overlap = !data.logging_specs.empty();

  WeightedEstimate out;
  double mean = 0.0;
  std::size_t j = 0;
  for (const auto& e : data.entries) {
    const auto target = eval.probabilities(e.context);
    bool violated = false;
    if (check_overlap) {
      const auto logging =
          mixture_probabilities(data.logging_specs, data.weights_at_collection, e.context);
      for (std::size_t a = 0; a < kActionCount; ++a) {
        violated = violated || (target.prob(a) > 0.0 && logging.prob(a) == 0.0);
      }
      if (cfg.verify_propensities &&
          std::abs(logging[e.action] - e.mixture_propensity) > 1e-12) {
        throw ConfigError(fmt::format("entry {}: logged propensity {} but mixture gives {}", j,
                                      e.mixture_propensity, logging[e.action]));
      }
    }
    const double eval_prob = target[e.action];
    double weight = 0.0;
    if (e.mixture_propensity > 0.0 || cfg.overlap_mode == OverlapMode::kClip) {
      weight = importance_weight(eval_prob, e.mixture_propensity, cfg);
    } else {
      violated = violated || eval_prob > 0.0;
    }
    if (violated) {
      ++out.support_violations;
    }
    out.max_importance_weight = std::max(out.max_importance_weight, weight);
    ++j;
    mean += (weight * e.reward - mean) / static_cast<double>(j);
  }
  out.value = mean;
  return out;
}

double bips_estimate(const LoggedDataset& data, const EvalPolicy& eval,
                     const EstimatorConfig& cfg) {
  const auto result = bips_diagnostics(data, eval, cfg);
  if (cfg.overlap_mode == OverlapMode::kError && result.support_violations > 0) {
    throw SupportViolation(fmt::format(
        "{} of {} logged contexts give an evaluation action zero logging propensity",
        result.support_violations, data.size()));
  }
  return result.value;
}

double ips_estimate(const LoggedDataset& data, const EvalPolicy& eval, const EstimatorConfig& cfg) {
  if (data.weights_at_collection.size() != 1) {
    throw ConfigError(fmt::format("IPS needs a single logging policy, data has {}",
                                  data.weights_at_collection.size()));
  }
  // With one logger the mixture propensity is that logger's propensity.
  return bips_estimate(data, eval, cfg);
}

}  // namespace mixopt
