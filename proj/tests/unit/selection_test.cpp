#include "acn/evolution.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace acn {
namespace {

std::vector<Individual> population(const std::vector<double>& fitness) {
  std::vector<Individual> pop;
  Rng rng(1);
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    Individual ind;
    ind.fitness = fitness[i];
    ind.lineage_id = i;
    ind.actor = build_actor({4}, 3, 1, {2.0}, rng);
    ind.critic = build_critic({4}, 3, 1, rng);
    pop.push_back(std::move(ind));
  }
  return pop;
}

TEST(GaConfig, EliteCount) {
  GaConfig cfg;
  EXPECT_EQ(cfg.elite_count(), 1u);  // 5% of 20
  cfg.population_size = 10;
  EXPECT_EQ(cfg.elite_count(), 1u);
  cfg.population_size = 100;
  EXPECT_EQ(cfg.elite_count(), 5u);
  EXPECT_DOUBLE_EQ(GaConfig{}.add_nodes_prob(), 0.8);
}

TEST(GaConfig, Validation) {
  EXPECT_NO_THROW(GaConfig{}.validate());
  GaConfig c;
  c.growth_prob = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.tournament_size = 21;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.node_counts = {};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(TopK, PicksHighestFitness) {
  const auto pop = population({3.0, 1.0, 2.0});
  const auto elite = top_k(pop, 1);
  ASSERT_EQ(elite.size(), 1u);
  EXPECT_EQ(elite[0].lineage_id, 0u);
  const auto two = top_k(pop, 2);
  EXPECT_EQ(two[1].lineage_id, 2u);
}

TEST(TopK, TiesGoToLowerLineage) {
  auto pop = population({1.0, 5.0, 5.0});
  pop[1].lineage_id = 9;
  pop[2].lineage_id = 4;
  EXPECT_EQ(top_k(pop, 1)[0].lineage_id, 4u);
}

TEST(TopK, DeepCopies) {
  auto pop = population({1.0, 2.0});
  auto elite = top_k(pop, 1);
  elite[0].actor.net.params[0][0] += 1.0;
  EXPECT_NE(elite[0].actor, pop[1].actor);
}

TEST(TopK, RejectsOversizedK) {
  const auto pop = population({1.0, 2.0});
  EXPECT_THROW(top_k(pop, 3), std::invalid_argument);
}

TEST(Tournament, WinnerIsFittestEntrant) {
  const auto pop = population({3.0, 1.0, 2.0});
  const std::size_t all[] = {0, 1, 2};
  EXPECT_EQ(tournament_winner(pop, all), 0u);
}

TEST(Tournament, ExhaustiveTriplesMatchBruteForce) {
  for (const auto& fit : {std::vector<double>{0.5, -1.0, 7.0, 2.0}, std::vector<double>{4, 9, -3, 0.25, 8, 1}}) {
    const auto pop = population(fit);
    const std::size_t n = fit.size();
    std::size_t checked = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        for (std::size_t c = b + 1; c < n; ++c) {
          std::size_t order[] = {a, b, c};
          std::sort(order, order + 3);
          do {
            const std::size_t expect = *std::max_element(order, order + 3,
                                                         [&](std::size_t x, std::size_t y) { return fit[x] < fit[y]; });
            EXPECT_EQ(tournament_winner(pop, order), expect);
          } while (std::next_permutation(order, order + 3));
          ++checked;
        }
      }
    }
    EXPECT_EQ(checked, n == 4 ? 4u : 20u);
  }
}

TEST(Tournament, WinnerRankDistributionMatchesSamplingWithoutReplacement) {
  const auto pop = population({6, 5, 4, 3, 2, 1});
  // P(winner has rank r) = C(6 - r, 2) / C(6, 3).
  const double p[] = {10.0 / 20, 6.0 / 20, 3.0 / 20, 1.0 / 20, 0.0, 0.0};
  Rng rng(2);
  const int n = 10000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < n; ++i) ++counts[run_tournament(pop, 3, rng)];
  for (std::size_t r = 0; r < 6; ++r) {
    const double sd = std::sqrt(n * p[r] * (1 - p[r]));
    EXPECT_LE(std::abs(counts[r] - n * p[r]), 5 * sd + 1e-9) << "rank " << r;
  }
}

TEST(Tournament, RejectsOversizedTournament) {
  const auto pop = population({1.0, 2.0});
  Rng rng(3);
  EXPECT_THROW(run_tournament(pop, 3, rng), std::invalid_argument);
  GaConfig cfg;
  cfg.population_size = 2;
  EXPECT_THROW(tournament_select(pop, cfg, rng), std::invalid_argument);
}

TEST(TournamentSelect, SlotCountAndDeepCopies) {
  std::vector<double> fit;
  for (int i = 0; i < 20; ++i) fit.push_back(i * 1.5 - 7);
  const auto pop = population(fit);
  Rng rng(4);
  const auto parents = tournament_select(pop, GaConfig{}, rng);
  ASSERT_EQ(parents.size(), 19u);
  for (const ParentPair& p : parents) {
    EXPECT_EQ(p.actor, pop[p.actor_parent].actor);
    EXPECT_EQ(p.critic, pop[p.critic_parent].critic);
    // Rank 19 or 18 can never win a 3-entrant tournament.
    EXPECT_GE(p.actor_parent, 2u);
  }
}

TEST(TournamentSelect, ActorAndCriticDrawnIndependently) {
  const auto pop = population({6, 5, 4, 3, 2, 1});
  GaConfig cfg;
  cfg.population_size = 6;
  cfg.elite_fraction = 0.0;  // one elite, 5 slots per call
  Rng rng(5);
  int same = 0, total = 0;
  while (total < 10000) {
    for (const ParentPair& p : tournament_select(pop, cfg, rng)) {
      same += p.actor_parent == p.critic_parent;
      ++total;
    }
  }
  // Independent draws: P(same) = sum_r p_r^2 = 146/400.
  const double p = 146.0 / 400.0;
  EXPECT_LE(std::abs(same - total * p), 5 * std::sqrt(total * p * (1 - p)));
}

}  // namespace
}  // namespace acn
