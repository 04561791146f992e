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

#include "mixopt/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "mixopt/errors.hpp"

namespace mixopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Key = std::vector<std::int64_t>;

Key rounded_key(const MixtureWeights& alpha) {
  Key key;
  key.reserve(alpha.size());
  for (double a : alpha.values()) {
    key.push_back(std::llround(a * 1e9));
  }
  return key;
}

double objective_value(const ObjectiveVector& v, std::size_t m) {
  return m == 0 ? v.neg_revenue : v.ope_error;
}

}  // namespace

void MooConfig::validate() const {
  if (population_size < 4 || population_size % 2 != 0) {
    throw ConfigError(
        fmt::format("population_size must be even and >= 4, got {}", population_size));
  }
  if (evaluation_budget < population_size) {
    throw ConfigError(fmt::format("evaluation_budget {} smaller than population_size {}",
                                  evaluation_budget, population_size));
  }
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
    throw ConfigError(fmt::format("crossover_prob {} outside [0, 1]", crossover_prob));
  }
  if (mutation_prob > 1.0 || std::isnan(mutation_prob)) {
    throw ConfigError(fmt::format("mutation_prob {} above 1", mutation_prob));
  }
  if (!(sbx_eta > 0.0) || !(mutation_eta > 0.0)) {
    throw ConfigError("sbx_eta and mutation_eta must be positive");
  }
}

bool dominates(const ObjectiveVector& u, const ObjectiveVector& v) noexcept {
  return u.neg_revenue <= v.neg_revenue && u.ope_error <= v.ope_error &&
         (u.neg_revenue < v.neg_revenue || u.ope_error < v.ope_error);
}

std::vector<std::vector<std::size_t>> fast_non_dominated_sort(
    std::span<const ObjectiveVector> objectives) {
  const std::size_t n = objectives.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;

  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (dominates(objectives[p], objectives[q])) {
        dominated[p].push_back(q);
      } else if (dominates(objectives[q], objectives[p])) {
        ++domination_count[p];
      }
    }
    if (domination_count[p] == 0) {
      current.push_back(p);
    }
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current) {
      for (std::size_t q : dominated[p]) {
        if (--domination_count[q] == 0) {
          next.push_back(q);
        }
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), kInf);
    return distance;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < 2; ++m) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return objective_value(front[a], m) < objective_value(front[b], m);
    });
    distance[order.front()] = kInf;
    distance[order.back()] = kInf;

    // The infinite OPE sentinel is excluded from the normalizing range; gaps
    // that reach it count as infinite.
    const double low = objective_value(front[order.front()], m);
    double high = low;
    for (std::size_t i : order) {
      const double v = objective_value(front[i], m);
      if (std::isfinite(v)) {
        high = std::max(high, v);
      }
    }
    const double range = high - low;

    for (std::size_t r = 1; r + 1 < n; ++r) {
      const double prev = objective_value(front[order[r - 1]], m);
      const double next = objective_value(front[order[r + 1]], m);
      if (next == prev) {
        continue;
      }
      const double gap = next - prev;
      distance[order[r]] += std::isinf(gap) ? kInf : gap / range;
    }
  }
  return distance;
}

double sbx_spread(double u, double eta) noexcept {
  const double exponent = 1.0 / (eta + 1.0);
  if (u <= 0.5) {
    return std::pow(2.0 * u, exponent);
  }
  return std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
}

std::pair<double, double> sbx_gene_pair(double a, double b, double beta) noexcept {
  return {0.5 * ((1.0 + beta) * a + (1.0 - beta) * b), 0.5 * ((1.0 - beta) * a + (1.0 + beta) * b)};
}

std::pair<Genome, Genome> sbx_crossover(const Genome& a, const Genome& b, const MooConfig& cfg,
                                        RandomSource& rng) {
  if (a.genes.size() != b.genes.size()) {
    throw ConfigError(fmt::format("cannot cross genomes of length {} and {}", a.genes.size(),
                                  b.genes.size()));
  }
  Genome first = a;
  Genome second = b;
  for (std::size_t i = 0; i < a.genes.size(); ++i) {
    if (rng.uniform() >= cfg.crossover_prob) {
      continue;
    }
    const double beta = sbx_spread(rng.uniform(), cfg.sbx_eta);
    if (std::abs(a.genes[i] - b.genes[i]) <= 1e-14) {
      continue;
    }
    const auto [c1, c2] = sbx_gene_pair(a.genes[i], b.genes[i], beta);
    first.genes[i] = std::clamp(c1, 0.0, 1.0);
    second.genes[i] = std::clamp(c2, 0.0, 1.0);
  }
  return {std::move(first), std::move(second)};
}

Genome polynomial_mutation(const Genome& g, const MooConfig& cfg, RandomSource& rng) {
  const double prob = cfg.mutation_prob_for(g.genes.size());
  const double exponent = 1.0 / (cfg.mutation_eta + 1.0);
  Genome out = g;
  for (double& y : out.genes) {
    if (rng.uniform() >= prob) {
      continue;
    }
    const double r = rng.uniform();
    double delta = 0.0;
    if (r < 0.5) {
      const double lower_gap = 1.0 - y;
      const double val = 2.0 * r + (1.0 - 2.0 * r) * std::pow(lower_gap, cfg.mutation_eta + 1.0);
      delta = std::pow(val, exponent) - 1.0;
    } else {
      const double upper_gap = y;
      const double val =
          2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(upper_gap, cfg.mutation_eta + 1.0);
      delta = 1.0 - std::pow(val, exponent);
    }
    y = std::clamp(y + delta, 0.0, 1.0);
  }
  return out;
}

MixtureWeights simplex_repair(const Genome& g) {
  if (g.genes.empty()) {
    throw ConfigError("cannot repair an empty genome");
  }
  double total = 0.0;
  for (double v : g.genes) {
    if (!(v >= 0.0)) {
      throw ConfigError(fmt::format("genome ({}) has a negative gene", fmt::join(g.genes, ", ")));
    }
    total += v;
  }
  const auto k = static_cast<double>(g.genes.size());
  std::vector<double> alpha(g.genes.size(), 1.0 / k);
  if (total > 0.0) {
    std::transform(g.genes.begin(), g.genes.end(), alpha.begin(),
                   [total](double v) { return v / total; });
  }
  return MixtureWeights{std::move(alpha)};
}

std::vector<ParetoPoint> extract_frontier(std::span<const EvaluatedCandidate> evaluated) {
  std::vector<std::size_t> order(evaluated.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& u = evaluated[a];
    const auto& v = evaluated[b];
    if (u.objectives.neg_revenue != v.objectives.neg_revenue) {
      return u.objectives.neg_revenue < v.objectives.neg_revenue;
    }
    if (u.objectives.ope_error != v.objectives.ope_error) {
      return u.objectives.ope_error < v.objectives.ope_error;
    }
    return u.alpha < v.alpha;
  });

  std::vector<ParetoPoint> frontier;
  for (std::size_t i : order) {
    const auto& c = evaluated[i];
    if (!frontier.empty() && !(c.objectives.ope_error < frontier.back().ope_error)) {
      continue;
    }
    frontier.push_back(ParetoPoint{c.alpha, c.objectives.revenue(), c.objectives.ope_error});
  }
  return frontier;
}

namespace {

class Nsga2Run {
 public:
  Nsga2Run(const Objective& objective, std::size_t num_weights, const MooConfig& cfg)
      : objective_{objective}, k_{num_weights}, cfg_{cfg}, rng_{cfg.seed} {}

  NsgaResult run() {
    std::vector<Individual> population;
    for (std::size_t i = 0; i < cfg_.population_size; ++i) {
      Genome g;
      g.genes.resize(k_);
      for (double& v : g.genes) {
        v = rng_.uniform();
      }
      population.push_back(*evaluate(std::move(g)));
    }
    rank_and_crowd(population);

    std::size_t stall = 0;
    while (result_.evaluated.size() < cfg_.evaluation_budget && stall < cfg_.stall_generations) {
      const std::size_t before = result_.evaluated.size();
      auto offspring = make_offspring(population);
      if (offspring.empty()) {
        break;
      }
      stall = result_.evaluated.size() == before ? stall + 1 : 0;
      population = select_survivors(std::move(population), std::move(offspring));
      ++result_.generations;
    }
    if (stall >= cfg_.stall_generations) {
      spdlog::warn("NSGA-II stopped after {} generations without a new candidate ({} of {} "
                   "evaluations used)",
                   stall, result_.evaluated.size(), cfg_.evaluation_budget);
    }
    result_.population = std::move(population);
    result_.archive = extract_frontier(result_.evaluated);
    return std::move(result_);
  }

 private:
  std::optional<Individual> evaluate(Genome genome) {
    Individual ind;
    ind.alpha = simplex_repair(genome);
    ind.genome = std::move(genome);
    auto key = rounded_key(ind.alpha);
    if (auto it = seen_.find(key); it != seen_.end()) {
      ind.objectives = it->second;
      return ind;
    }
    if (result_.evaluated.size() >= cfg_.evaluation_budget) {
      return std::nullopt;
    }
    ind.objectives = objective_(ind.alpha);
    if (!std::isfinite(ind.objectives.neg_revenue)) {
      throw ObjectiveFailure(fmt::format("objective returned non-finite revenue {} at alpha ({})",
                                         -ind.objectives.neg_revenue,
                                         fmt::join(ind.alpha.values(), ", ")));
    }
    if (std::isnan(ind.objectives.ope_error) || ind.objectives.ope_error < 0.0) {
      throw ObjectiveFailure(fmt::format("objective returned invalid OPE error {} at alpha ({})",
                                         ind.objectives.ope_error,
                                         fmt::join(ind.alpha.values(), ", ")));
    }
    seen_.emplace(std::move(key), ind.objectives);
    result_.evaluated.push_back(EvaluatedCandidate{ind.alpha, ind.objectives});
    return ind;
  }

  std::size_t tournament(const std::vector<Individual>& population) {
    std::uniform_int_distribution<std::size_t> pick{0, population.size() - 1};
    const std::size_t a = pick(rng_.engine());
    const std::size_t b = pick(rng_.engine());
    const auto& x = population[a];
    const auto& y = population[b];
    if (x.rank != y.rank) {
      return x.rank < y.rank ? a : b;
    }
    return y.crowding > x.crowding ? b : a;
  }

  std::vector<Individual> make_offspring(const std::vector<Individual>& population) {
    std::vector<Individual> offspring;
    while (offspring.size() < cfg_.population_size) {
      const auto& p1 = population[tournament(population)];
      const auto& p2 = population[tournament(population)];
      auto [c1, c2] = sbx_crossover(p1.genome, p2.genome, cfg_, rng_);
      for (Genome* child : {&c1, &c2}) {
        if (offspring.size() == cfg_.population_size) {
          break;
        }
        auto ind = evaluate(polynomial_mutation(*child, cfg_, rng_));
        if (!ind) {
          return offspring;
        }
        offspring.push_back(std::move(*ind));
      }
    }
    return offspring;
  }

  static void assign_front(std::vector<Individual>& pool, const std::vector<std::size_t>& front,
                           std::size_t rank) {
    std::vector<ObjectiveVector> objs;
    objs.reserve(front.size());
    for (std::size_t i : front) {
      objs.push_back(pool[i].objectives);
    }
    const auto crowding = crowding_distance(objs);
    for (std::size_t r = 0; r < front.size(); ++r) {
      pool[front[r]].rank = rank;
      pool[front[r]].crowding = crowding[r];
    }
  }

  static std::vector<std::vector<std::size_t>> sort_pool(std::vector<Individual>& pool) {
    std::vector<ObjectiveVector> objs;
    objs.reserve(pool.size());
    for (const auto& ind : pool) {
      objs.push_back(ind.objectives);
    }
    auto fronts = fast_non_dominated_sort(objs);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
      assign_front(pool, fronts[f], f);
    }
    return fronts;
  }

  static void rank_and_crowd(std::vector<Individual>& population) { sort_pool(population); }

  std::vector<Individual> select_survivors(std::vector<Individual> parents,
                                           std::vector<Individual> offspring) const {
    std::vector<Individual> pool = std::move(parents);
    pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                std::make_move_iterator(offspring.end()));
    const auto fronts = sort_pool(pool);

    std::vector<Individual> next;
    next.reserve(cfg_.population_size);
    for (const auto& front : fronts) {
      if (next.size() + front.size() <= cfg_.population_size) {
        for (std::size_t i : front) {
          next.push_back(pool[i]);
        }
        continue;
      }
      std::vector<std::size_t> by_crowding = front;
      std::stable_sort(by_crowding.begin(), by_crowding.end(), [&](std::size_t a, std::size_t b) {
        return pool[a].crowding > pool[b].crowding;
      });
      for (std::size_t i : by_crowding) {
        if (next.size() == cfg_.population_size) {
          break;
        }
        next.push_back(pool[i]);
      }
      break;
    }
    return next;
  }

  const Objective& objective_;
  std::size_t k_;
  MooConfig cfg_;
  RandomSource rng_;
  std::map<Key, ObjectiveVector> seen_;
  NsgaResult result_;
};

}  // namespace

NsgaResult run_nsga2(const Objective& objective, std::size_t num_weights, const MooConfig& cfg) {
  cfg.validate();
  if (num_weights == 0) {
    throw ConfigError("the optimizer needs at least one mixture weight");
  }
  return Nsga2Run{objective, num_weights, cfg}.run();
}

}  // namespace mixopt
