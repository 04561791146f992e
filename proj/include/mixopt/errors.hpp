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

#ifndef MIXOPT_ERRORS_HPP
#define MIXOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mixopt {

/// Invalid scenario, policy, or weight configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The evaluation policy puts mass on an action the logging mixture never takes.
class SupportViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The naive estimator found no logged action matching the evaluation policy.
class NoMatchingSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An objective returned a value the optimizer cannot rank.
class ObjectiveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mixopt

#endif  // MIXOPT_ERRORS_HPP
