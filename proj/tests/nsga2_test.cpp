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
#include <numeric>
#include <vector>

#include "mixopt/errors.hpp"
#include "mixopt/nsga2.hpp"
#include "oracles.hpp"

namespace {

using mixopt::EvaluatedCandidate;
using mixopt::Genome;
using mixopt::MixtureWeights;
using mixopt::MooConfig;
using mixopt::ObjectiveVector;
using mixopt::RandomSource;

constexpr double kInf = std::numeric_limits<double>::infinity();

ObjectiveVector ov(double a, double b) { return ObjectiveVector{a, b, 0.0}; }

std::vector<ObjectiveVector> random_objectives(RandomSource& rng, std::size_t n, bool coarse) {
  std::vector<ObjectiveVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    double a = rng.uniform();
    double b = rng.uniform();
    if (coarse) {
      a = std::floor(a * 5.0);
      b = std::floor(b * 5.0);
    }
    out.push_back(ov(a, b));
  }
  return out;
}

MixtureWeights random_weights(RandomSource& rng, std::size_t k) {
  Genome g;
  for (std::size_t i = 0; i < k; ++i) {
    g.genes.push_back(rng.uniform());
  }
  return mixopt::simplex_repair(g);
}

TEST(Dominates, Examples) {
  EXPECT_TRUE(mixopt::dominates(ov(1, 1), ov(2, 2)));
  EXPECT_FALSE(mixopt::dominates(ov(1, 2), ov(2, 1)));
  EXPECT_FALSE(mixopt::dominates(ov(2, 1), ov(1, 2)));
  EXPECT_FALSE(mixopt::dominates(ov(1, 1), ov(1, 1)));
  EXPECT_TRUE(mixopt::dominates(ov(1, 1), ov(1, 2)));
}

TEST(Dominates, InfiniteSentinelIsWorst) {
  EXPECT_TRUE(mixopt::dominates(ov(1, 1e300), ov(1, kInf)));
  EXPECT_FALSE(mixopt::dominates(ov(1, kInf), ov(1, 5)));
  EXPECT_FALSE(mixopt::dominates(ov(1, kInf), ov(1, kInf)));
  EXPECT_TRUE(mixopt::dominates(ov(0, kInf), ov(1, kInf)));
}

TEST(FastNonDominatedSort, Example) {
  const std::vector<ObjectiveVector> objs{ov(1, 2), ov(2, 1), ov(2, 2), ov(3, 3)};
  const auto fronts = mixopt::fast_non_dominated_sort(objs);
  ASSERT_EQ(fronts.size(), 3u);
  EXPECT_EQ(fronts[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(fronts[1], (std::vector<std::size_t>{2}));
  EXPECT_EQ(fronts[2], (std::vector<std::size_t>{3}));
}

TEST(FastNonDominatedSort, IdenticalVectorsShareOneFront) {
  const std::vector<ObjectiveVector> objs(7, ov(0.5, 0.5));
  const auto fronts = mixopt::fast_non_dominated_sort(objs);
  ASSERT_EQ(fronts.size(), 1u);
  EXPECT_EQ(fronts[0].size(), 7u);
}

TEST(FastNonDominatedSort, MatchesBruteForce) {
  RandomSource rng{50};
  for (bool coarse : {false, true}) {
    const auto objs = random_objectives(rng, 200, coarse);
    EXPECT_EQ(mixopt::fast_non_dominated_sort(objs), oracle::fronts(objs));
  }
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + static_cast<std::size_t>(rng.uniform() * 64.0);
    const auto objs = random_objectives(rng, n, trial % 2 == 0);
    ASSERT_EQ(mixopt::fast_non_dominated_sort(objs), oracle::fronts(objs));
  }
}

TEST(FastNonDominatedSort, EveryIndexOnce) {
  RandomSource rng{51};
  const auto objs = random_objectives(rng, 100, true);
  std::vector<int> seen(100, 0);
  for (const auto& front : mixopt::fast_non_dominated_sort(objs)) {
    for (std::size_t i : front) {
      ++seen[i];
    }
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

TEST(CrowdingDistance, BoundaryOnlyFronts) {
  const std::vector<ObjectiveVector> one{ov(1, 1)};
  const std::vector<ObjectiveVector> two{ov(1, 2), ov(2, 1)};
  for (double d : mixopt::crowding_distance(one)) {
    EXPECT_EQ(d, kInf);
  }
  for (double d : mixopt::crowding_distance(two)) {
    EXPECT_EQ(d, kInf);
  }
}

TEST(CrowdingDistance, InteriorPoint) {
  const std::vector<ObjectiveVector> front{ov(1, 3), ov(2, 2), ov(3, 1)};
  const auto d = mixopt::crowding_distance(front);
  EXPECT_EQ(d[0], kInf);
  EXPECT_DOUBLE_EQ(d[1], 2.0);
  EXPECT_EQ(d[2], kInf);
}

TEST(CrowdingDistance, InteriorDuplicatesGetZero) {
  const std::vector<ObjectiveVector> front{ov(1, 3), ov(2, 2), ov(2, 2), ov(2, 2), ov(3, 1)};
  const auto d = mixopt::crowding_distance(front);
  EXPECT_EQ(d[2], 0.0);
}

TEST(CrowdingDistance, ZeroRangeContributesNothing) {
  const std::vector<ObjectiveVector> front{ov(1, 5), ov(2, 5), ov(4, 5)};
  const auto d = mixopt::crowding_distance(front);
  // Objective 0 alone: (4 - 1) / (4 - 1).
  EXPECT_DOUBLE_EQ(d[1], 1.0);
}

TEST(CrowdingDistance, InfiniteSentinelStaysOrdered) {
  const std::vector<ObjectiveVector> front{ov(0, kInf), ov(1, kInf), ov(2, 3), ov(3, 2),
                                           ov(4, 1)};
  const auto d = mixopt::crowding_distance(front);
  for (double v : d) {
    EXPECT_FALSE(std::isnan(v));
    EXPECT_GE(v, 0.0);
  }
  EXPECT_DOUBLE_EQ(d[3], 2.0 / 4.0 + 2.0 / 2.0);
}

TEST(Sbx, ZeroProbabilityCopiesParents) {
  RandomSource rng{52};
  MooConfig cfg;
  cfg.crossover_prob = 0.0;
  const Genome a{{0.1, 0.5, 0.9}};
  const Genome b{{0.7, 0.2, 0.3}};
  const auto [c1, c2] = mixopt::sbx_crossover(a, b, cfg, rng);
  EXPECT_EQ(c1.genes, a.genes);
  EXPECT_EQ(c2.genes, b.genes);
}

TEST(Sbx, IdenticalParentsReproduce) {
  RandomSource rng{53};
  MooConfig cfg;
  cfg.crossover_prob = 1.0;
  const Genome a{{0.1, 0.5, 0.9}};
  for (int i = 0; i < 100; ++i) {
    const auto [c1, c2] = mixopt::sbx_crossover(a, a, cfg, rng);
    EXPECT_EQ(c1.genes, a.genes);
    EXPECT_EQ(c2.genes, a.genes);
  }
}

TEST(Sbx, SpreadPreservesParentMean) {
  RandomSource rng{54};
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    const double beta = mixopt::sbx_spread(rng.uniform(), 15.0);
    const auto [c1, c2] = mixopt::sbx_gene_pair(a, b, beta);
    EXPECT_NEAR((c1 + c2) / 2.0, (a + b) / 2.0, 1e-12);
  }
}

TEST(Sbx, ChildrenStayInUnitBox) {
  RandomSource rng{55};
  MooConfig cfg;
  cfg.crossover_prob = 1.0;
  cfg.sbx_eta = 0.5;
  for (int i = 0; i < 1000; ++i) {
    const Genome a{{rng.uniform(), rng.uniform()}};
    const Genome b{{rng.uniform(), rng.uniform()}};
    const auto [c1, c2] = mixopt::sbx_crossover(a, b, cfg, rng);
    for (double g : c1.genes) {
      ASSERT_TRUE(g >= 0.0 && g <= 1.0);
    }
    for (double g : c2.genes) {
      ASSERT_TRUE(g >= 0.0 && g <= 1.0);
    }
  }
}

TEST(Sbx, LengthMismatch) {
  RandomSource rng{56};
  EXPECT_THROW((void)mixopt::sbx_crossover(Genome{{0.1}}, Genome{{0.1, 0.2}}, MooConfig{}, rng),
               mixopt::ConfigError);
}

TEST(PolynomialMutation, ZeroProbabilityIsIdentity) {
  RandomSource rng{57};
  MooConfig cfg;
  cfg.mutation_prob = 0.0;
  const Genome g{{0.2, 0.4, 0.6}};
  EXPECT_EQ(mixopt::polynomial_mutation(g, cfg, rng).genes, g.genes);
}

TEST(PolynomialMutation, StaysInUnitBox) {
  RandomSource rng{58};
  MooConfig cfg;
  cfg.mutation_prob = 1.0;
  cfg.mutation_eta = 1.0;
  for (int i = 0; i < 5000; ++i) {
    const Genome g{{rng.uniform(), 0.0, 1.0}};
    for (double v : mixopt::polynomial_mutation(g, cfg, rng).genes) {
      ASSERT_TRUE(v >= 0.0 && v <= 1.0);
    }
  }
}

TEST(PolynomialMutation, LargeIndexGivesSmallSteps) {
  RandomSource rng{59};
  MooConfig cfg;
  cfg.mutation_prob = 1.0;
  cfg.mutation_eta = 100.0;
  double total_change = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double before = rng.uniform();
    total_change += std::abs(mixopt::polynomial_mutation(Genome{{before}}, cfg, rng).genes[0] -
                             before);
  }
  EXPECT_LT(total_change / 10000.0, 0.05);
}

TEST(SimplexRepair, Examples) {
  EXPECT_EQ(mixopt::simplex_repair(Genome{{2.0, 2.0, 0.0}}), MixtureWeights({0.5, 0.5, 0.0}));
  const auto uniform = mixopt::simplex_repair(Genome{{0.0, 0.0, 0.0}});
  for (double a : uniform.values()) {
    EXPECT_DOUBLE_EQ(a, 1.0 / 3.0);
  }
  const Genome already{{0.2, 0.3, 0.5}};
  const auto same = mixopt::simplex_repair(already);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(same[i], already.genes[i], 1e-15);
  }
  EXPECT_THROW((void)mixopt::simplex_repair(Genome{{-0.1, 1.1}}), mixopt::ConfigError);
}

TEST(ExtractFrontier, Degenerate) {
  const std::vector<EvaluatedCandidate> one{{MixtureWeights{{1.0}}, ov(-1, 2)}};
  const auto f1 = mixopt::extract_frontier(one);
  ASSERT_EQ(f1.size(), 1u);
  EXPECT_EQ(f1[0].revenue, 1.0);
  EXPECT_EQ(f1[0].ope_error, 2.0);

  const std::vector<EvaluatedCandidate> two{{MixtureWeights{{0.5, 0.5}}, ov(-1, 2)},
                                            {MixtureWeights{{1.0, 0.0}}, ov(-2, 1)}};
  const auto f2 = mixopt::extract_frontier(two);
  ASSERT_EQ(f2.size(), 1u);
  EXPECT_EQ(f2[0].alpha, MixtureWeights({1.0, 0.0}));
}

TEST(ExtractFrontier, TiesKeepSmallestAlpha) {
  const std::vector<EvaluatedCandidate> tied{{MixtureWeights{{0.7, 0.3}}, ov(-1, 1)},
                                             {MixtureWeights{{0.2, 0.8}}, ov(-1, 1)},
                                             {MixtureWeights{{0.4, 0.6}}, ov(-1, 1)}};
  const auto f = mixopt::extract_frontier(tied);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].alpha, MixtureWeights({0.2, 0.8}));
}

TEST(ExtractFrontier, MatchesBruteForce) {
  RandomSource rng{60};
  for (bool coarse : {false, true}) {
    std::vector<EvaluatedCandidate> candidates;
    for (int i = 0; i < 500; ++i) {
      double a = rng.uniform();
      double b = rng.uniform() < 0.05 ? kInf : rng.uniform();
      if (coarse) {
        a = std::floor(a * 8.0);
        b = std::isinf(b) ? b : std::floor(b * 8.0);
      }
      candidates.push_back({random_weights(rng, 3), ov(a, b)});
    }
    const auto got = mixopt::extract_frontier(candidates);
    const auto want = oracle::frontier(candidates);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].alpha, want[i].alpha);
      EXPECT_EQ(got[i].revenue, want[i].revenue);
      EXPECT_EQ(got[i].ope_error, want[i].ope_error);
    }
  }
}

// A cheap bi-objective problem whose Pareto set is the whole simplex face
// traced by alpha_1: F(alpha) = (alpha_1, 1 - alpha_1).
ObjectiveVector linear_tradeoff(const MixtureWeights& a) { return ov(a[0], 1.0 - a[0]); }

// F = (alpha_1 + alpha_3, (1 - alpha_1)^2 + alpha_3); the Pareto set is alpha_3 = 0.
ObjectiveVector curved_tradeoff(const MixtureWeights& a) {
  return ov(a[0] + a[2], (1.0 - a[0]) * (1.0 - a[0]) + a[2]);
}

TEST(RunNsga2, BudgetEqualToPopulationKeepsInitialFront) {
  MooConfig cfg;
  cfg.population_size = 8;
  cfg.evaluation_budget = 8;
  cfg.seed = 3;
  const auto result = mixopt::run_nsga2(curved_tradeoff, 3, cfg);
  EXPECT_EQ(result.generations, 0u);
  ASSERT_EQ(result.evaluated.size(), 8u);
  const auto expected = oracle::frontier(result.evaluated);
  ASSERT_EQ(result.archive.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(result.archive[i].alpha, expected[i].alpha);
  }
}

TEST(RunNsga2, SameSeedSameArchive) {
  MooConfig cfg;
  cfg.population_size = 12;
  cfg.evaluation_budget = 300;
  cfg.seed = 17;
  const auto a = mixopt::run_nsga2(curved_tradeoff, 3, cfg);
  const auto b = mixopt::run_nsga2(curved_tradeoff, 3, cfg);
  ASSERT_EQ(a.archive.size(), b.archive.size());
  for (std::size_t i = 0; i < a.archive.size(); ++i) {
    EXPECT_EQ(a.archive[i].alpha, b.archive[i].alpha);
    EXPECT_EQ(a.archive[i].revenue, b.archive[i].revenue);
    EXPECT_EQ(a.archive[i].ope_error, b.archive[i].ope_error);
  }
}

TEST(RunNsga2, AnalyticFrontier) {
  MooConfig cfg;
  cfg.seed = 4;
  cfg.evaluation_budget = 400;
  const auto result = mixopt::run_nsga2(linear_tradeoff, 3, cfg);
  ASSERT_GE(result.archive.size(), 2u);
  for (const auto& p : result.archive) {
    EXPECT_NEAR(-p.revenue + p.ope_error, 1.0, 1e-6);
    EXPECT_NEAR(-p.revenue, p.alpha[0], 1e-12);
  }
}

TEST(RunNsga2, ConvergesOnCurvedProblem) {
  MooConfig cfg;
  cfg.seed = 5;
  cfg.evaluation_budget = 1000;
  const auto result = mixopt::run_nsga2(curved_tradeoff, 3, cfg);
  // The true front is error == (1 - f1)^2 with f1 in [0, 1]; its hypervolume
  // against the reference point (1, 1) is 2/3.
  // The archive is ordered by f1 ascending with error descending.
  double hypervolume = 0.0;
  for (std::size_t i = 0; i < result.archive.size(); ++i) {
    const double f1 = -result.archive[i].revenue;
    const double error = result.archive[i].ope_error;
    EXPECT_GE(error - (1.0 - f1) * (1.0 - f1), -1e-12);
    const double next_f1 = i + 1 < result.archive.size() ? -result.archive[i + 1].revenue : 1.0;
    hypervolume += (std::min(next_f1, 1.0) - f1) * std::max(0.0, 1.0 - error);
  }
  EXPECT_GT(hypervolume, 2.0 / 3.0 - 5e-3);
  EXPECT_GE(result.archive.size(), 10u);
}

TEST(RunNsga2, InvariantsAndBudget) {
  MooConfig cfg;
  cfg.seed = 6;
  cfg.evaluation_budget = 250;
  std::size_t calls = 0;
  auto counting = [&calls](const MixtureWeights& a) {
    ++calls;
    // Unsupported corner mimics the OPE sentinel.
    return ov(-a[1], a[0] < 1e-3 ? kInf : (1.0 - a[0]) * (1.0 - a[0]));
  };
  const auto result = mixopt::run_nsga2(counting, 3, cfg);
  EXPECT_LE(calls, cfg.evaluation_budget);
  EXPECT_EQ(calls, result.evaluated.size());
  for (const auto& c : result.evaluated) {
    const double sum = std::accumulate(c.alpha.values().begin(), c.alpha.values().end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (double a : c.alpha.values()) {
      EXPECT_TRUE(a >= 0.0 && a <= 1.0);
    }
  }
  for (const auto& p : result.archive) {
    for (const auto& q : result.archive) {
      EXPECT_FALSE(mixopt::dominates(ov(-p.revenue, p.ope_error), ov(-q.revenue, q.ope_error)));
    }
  }
  EXPECT_EQ(result.population.size(), cfg.population_size);
}

TEST(RunNsga2, AbortsOnNonFiniteRevenue) {
  MooConfig cfg;
  cfg.population_size = 4;
  cfg.evaluation_budget = 4;
  auto broken = [](const MixtureWeights&) { return ov(kInf, 0.0); };
  EXPECT_THROW((void)mixopt::run_nsga2(broken, 3, cfg), mixopt::ObjectiveFailure);
}

TEST(MooConfig, Validation) {
  MooConfig cfg;
  cfg.population_size = 5;
  EXPECT_THROW(cfg.validate(), mixopt::ConfigError);
  cfg.population_size = 2;
  EXPECT_THROW(cfg.validate(), mixopt::ConfigError);
  cfg = MooConfig{};
  cfg.evaluation_budget = 10;
  EXPECT_THROW(cfg.validate(), mixopt::ConfigError);
  cfg = MooConfig{};
  cfg.crossover_prob = 1.5;
  EXPECT_THROW(cfg.validate(), mixopt::ConfigError);
  cfg = MooConfig{};
  cfg.sbx_eta = 0.0;
  EXPECT_THROW(cfg.validate(), mixopt::ConfigError);
  EXPECT_DOUBLE_EQ(MooConfig{}.mutation_prob_for(4), 0.25);
}

}  // namespace
