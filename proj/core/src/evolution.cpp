#include "acn/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "acn/errors.hpp"
#include "acn/parallel.hpp"

namespace acn {

std::string to_string(DistillOptimizer opt) { return opt == DistillOptimizer::kAdam ? "adam" : "gd"; }

DistillOptimizer parse_distill_optimizer(std::string_view text) {
  if (text == "adam") return DistillOptimizer::kAdam;
  if (text == "gd") return DistillOptimizer::kGradientDescent;
  throw std::invalid_argument("unknown distillation optimizer \"" + std::string(text) + "\" (expected adam or gd)");
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("ACN_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t GaConfig::elite_count() const {
  const auto k = static_cast<std::size_t>(std::llround(elite_fraction * static_cast<double>(population_size)));
  return std::max<std::size_t>(1, k);
}

void GaConfig::validate() const {
  const auto prob = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string("ga: ") + what + " must be in [0, 1]");
  };
  prob(growth_prob, "growth_prob");
  prob(add_layer_prob, "add_layer_prob");
  prob(elite_fraction, "elite_fraction");
  if (population_size < 2) throw std::invalid_argument("ga: population_size must be >= 2");
  if (elite_count() >= population_size) throw std::invalid_argument("ga: elite count must be < population size");
  if (tournament_size < 1 || tournament_size > population_size) {
    throw std::invalid_argument("ga: tournament_size must be in [1, population_size]");
  }
  if (node_counts.empty() || std::find(node_counts.begin(), node_counts.end(), 0) != node_counts.end()) {
    throw std::invalid_argument("ga: node_counts must be non-empty and positive");
  }
  if (!(distill_step_size > 0.0)) throw std::invalid_argument("ga: distill_step_size must be positive");
  if (distill_batch == 0) throw std::invalid_argument("ga: distill_batch must be positive");
  if (safe_mutation_batch == 0) throw std::invalid_argument("ga: safe_mutation_batch must be positive");
  if (rollouts_per_eval == 0) throw std::invalid_argument("ga: rollouts_per_eval must be positive");
  if (mutation_std < 0.0 || eval_exploration_std < 0.0) throw std::invalid_argument("ga: stds must be >= 0");
  if (!(sensitivity_floor > 0.0)) throw std::invalid_argument("ga: sensitivity_floor must be positive");
}

EvaluationResult evaluate(std::span<Individual> population, const Environment& env, const GaConfig& cfg,
                          const Rng& rng, EvaluateScope scope, std::size_t threads) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (scope == EvaluateScope::kAll || !population[i].fitness) todo.push_back(i);
  }
  std::vector<std::vector<Episode>> episodes(todo.size());
  parallel_for(todo.size(), threads, [&](std::size_t j) {
    Individual& ind = population[todo[j]];
    auto local_env = env.clone();
    Rng stream = rng.split(ind.lineage_id);
    double total = 0.0;
    for (std::size_t r = 0; r < cfg.rollouts_per_eval; ++r) {
      Episode ep = rollout(*local_env, ind.actor, cfg.eval_exploration_std, stream());
      total += ep.episode_return;
      episodes[j].push_back(std::move(ep));
    }
    ind.fitness = total / static_cast<double>(cfg.rollouts_per_eval);
  });

  EvaluationResult result;
  for (auto& eps : episodes) {
    for (auto& ep : eps) {
      result.env_steps += ep.steps;
      result.episode_lengths.push_back(ep.steps);
      std::move(ep.transitions.begin(), ep.transitions.end(), std::back_inserter(result.transitions));
    }
  }
  return result;
}

bool fitter(const Individual& a, const Individual& b) {
  if (!a.fitness || !b.fitness) throw std::invalid_argument("fitness comparison on unevaluated individual");
  if (*a.fitness != *b.fitness) return *a.fitness > *b.fitness;
  return a.lineage_id < b.lineage_id;
}

std::vector<Individual> top_k(std::span<const Individual> population, std::size_t k) {
  if (k > population.size()) throw std::invalid_argument("top_k: k exceeds population size");
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return fitter(population[a], population[b]); });
  std::vector<Individual> elites;
  elites.reserve(k);
  for (std::size_t i = 0; i < k; ++i) elites.push_back(population[order[i]]);
  return elites;
}

std::size_t tournament_winner(std::span<const Individual> population, std::span<const std::size_t> entrants) {
  if (entrants.empty()) throw std::invalid_argument("tournament_winner: no entrants");
  std::size_t best = entrants[0];
  for (std::size_t e : entrants.subspan(1)) {
    if (fitter(population[e], population[best])) best = e;
  }
  return best;
}

std::size_t run_tournament(std::span<const Individual> population, std::size_t size, Rng& rng) {
  if (size == 0 || size > population.size()) {
    throw std::invalid_argument("tournament size must be in [1, population size]");
  }
  // Partial Fisher-Yates: the first `size` slots are distinct uniform picks.
  std::vector<std::size_t> idx(population.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + rng.uniform_index(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  return tournament_winner(population, std::span<const std::size_t>(idx.data(), size));
}

std::vector<ParentPair> tournament_select(std::span<const Individual> population, const GaConfig& cfg, Rng& rng) {
  if (cfg.tournament_size > population.size()) {
    throw std::invalid_argument("tournament_select: tournament size exceeds population");
  }
  const std::size_t elites = cfg.elite_count();
  const std::size_t slots = population.size() > elites ? population.size() - elites : 0;
  std::vector<ParentPair> parents;
  parents.reserve(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    const std::size_t a = run_tournament(population, cfg.tournament_size, rng);
    const std::size_t c = run_tournament(population, cfg.tournament_size, rng);
    parents.push_back({population[a].actor, population[c].critic, population[a].lineage_id,
                       population[c].lineage_id});
  }
  return parents;
}

std::string to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::kAddLayer: return "add_layer";
    case MutationKind::kAddNodes: return "add_nodes";
    case MutationKind::kSafeMutation: return "safe_mutation";
  }
  return "safe_mutation";
}

std::vector<MutationResult> mutate(std::span<const ParentPair> parents, const ReplaySnapshot& replay,
                                   const GaConfig& cfg, const Rng& rng, std::size_t threads) {
  if (replay.empty()) throw EmptyMemoryError("mutate: replay memory is empty");
  std::vector<MutationResult> out(parents.size());
  parallel_for(parents.size(), threads, [&](std::size_t i) {
    Rng stream = rng.split(i);
    const ParentPair& p = parents[i];
    if (stream.bernoulli(cfg.growth_prob)) {
      out[i] = distilled_topology_mutation(p.actor, p.critic, replay, cfg, stream);
    } else {
      const Tensor states = replay.sample_batch(cfg.safe_mutation_batch, stream).states;
      out[i] = {safe_mutation_smgsum(p.actor, states, cfg.mutation_std, stream, cfg.sensitivity_floor,
                                     cfg.safe_mutation_batch),
                p.critic, MutationKind::kSafeMutation};
    }
  });
  return out;
}

}  // namespace acn
