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

#ifndef MIXOPT_NSGA2_HPP
#define MIXOPT_NSGA2_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "mixopt/objectives.hpp"
#include "mixopt/policies.hpp"
#include "mixopt/random.hpp"

namespace mixopt {

/// K nonnegative genes; the evaluated mixture ratio is their normalization.
struct Genome {
  std::vector<double> genes;
};

struct Individual {
  Genome genome;
  MixtureWeights alpha{std::vector<double>{1.0}};
  ObjectiveVector objectives;
  std::size_t rank = 0;
  double crowding = 0.0;
};

struct MooConfig {
  std::size_t population_size = 20;
  std::size_t evaluation_budget = 1000;
  double crossover_prob = 0.9;
  /// Per-gene mutation probability; a negative value means 1/K.
  double mutation_prob = -1.0;
  double sbx_eta = 15.0;
  double mutation_eta = 20.0;
  std::uint64_t seed = 0;
  /// Consecutive generations without a new unique candidate before giving up
  /// on the remaining budget.
  std::size_t stall_generations = 200;

  void validate() const;
  [[nodiscard]] double mutation_prob_for(std::size_t k) const {
    return mutation_prob < 0.0 ? 1.0 / static_cast<double>(k) : mutation_prob;
  }
};

struct ParetoPoint {
  MixtureWeights alpha{std::vector<double>{1.0}};
  double revenue = 0.0;
  double ope_error = 0.0;
};

struct EvaluatedCandidate {
  MixtureWeights alpha{std::vector<double>{1.0}};
  ObjectiveVector objectives;
};

struct NsgaResult {
  std::vector<Individual> population;
  std::vector<ParetoPoint> archive;
  /// Every unique candidate, in evaluation order.
  std::vector<EvaluatedCandidate> evaluated;
  std::size_t generations = 0;
};

using Objective = std::function<ObjectiveVector(const MixtureWeights&)>;

/// Pareto dominance for minimization of (neg_revenue, ope_error).
[[nodiscard]] bool dominates(const ObjectiveVector& u, const ObjectiveVector& v) noexcept;

/// Fronts of indices into `objectives`; indices ascend within each front.
[[nodiscard]] std::vector<std::vector<std::size_t>> fast_non_dominated_sort(
    std::span<const ObjectiveVector> objectives);

[[nodiscard]] std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

/// SBX spread factor beta for a uniform draw u in [0, 1).
[[nodiscard]] double sbx_spread(double u, double eta) noexcept;

/// Unclamped SBX recombination of one gene pair.
[[nodiscard]] std::pair<double, double> sbx_gene_pair(double a, double b, double beta) noexcept;

[[nodiscard]] std::pair<Genome, Genome> sbx_crossover(const Genome& a, const Genome& b,
                                                      const MooConfig& cfg, RandomSource& rng);

[[nodiscard]] Genome polynomial_mutation(const Genome& g, const MooConfig& cfg, RandomSource& rng);

/// Divides by the gene sum; an all-zero genome maps to the uniform mixture.
[[nodiscard]] MixtureWeights simplex_repair(const Genome& g);

/// Mutually non-dominated subset sorted by revenue descending. Candidates
/// with identical objectives keep only the lexicographically smallest alpha.
[[nodiscard]] std::vector<ParetoPoint> extract_frontier(std::span<const EvaluatedCandidate> evaluated);

/// NSGA-II over the K-simplex. The budget counts unique candidates (alpha
/// rounded to 1e-9); duplicates reuse their earlier objective values.
/// Throws ObjectiveFailure if the objective returns a non-finite neg_revenue.
[[nodiscard]] NsgaResult run_nsga2(const Objective& objective, std::size_t num_weights,
                                   const MooConfig& cfg);

}  // namespace mixopt

#endif  // MIXOPT_NSGA2_HPP
