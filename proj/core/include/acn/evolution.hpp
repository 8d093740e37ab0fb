#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acn/envs.hpp"
#include "acn/nets.hpp"
#include "acn/replay.hpp"
#include "acn/rng.hpp"
#include "acn/rollout.hpp"

namespace acn {

enum class DistillOptimizer { kAdam, kGradientDescent };
std::string to_string(DistillOptimizer opt);
/// "adam" or "gd"; throws std::invalid_argument otherwise.
DistillOptimizer parse_distill_optimizer(std::string_view text);

struct GaConfig {
  std::size_t population_size = 20;
  double elite_fraction = 0.05;
  std::size_t tournament_size = 3;
  double growth_prob = 0.2;
  double add_layer_prob = 0.2;
  std::vector<std::size_t> node_counts = {4, 8, 16, 32};
  std::size_t distill_updates = 500;
  std::size_t distill_batch = 100;
  DistillOptimizer distill_optimizer = DistillOptimizer::kAdam;
  double distill_step_size = 3e-3;
  std::size_t safe_mutation_batch = 1500;
  double mutation_std = 0.1;
  double sensitivity_floor = 1.0;    // perturbations are never larger than mutation_std
  std::size_t rollouts_per_eval = 1;
  double eval_exploration_std = 0.1;  // fraction of the action bound

  /// max(1, round(elite_fraction * population_size)).
  std::size_t elite_count() const;
  double add_nodes_prob() const { return 1.0 - add_layer_prob; }
  void validate() const;
};

struct Individual {
  std::optional<double> fitness;
  ActorNet actor;
  CriticNet critic;
  std::uint64_t lineage_id = 0;
};

// ---- evaluation and selection ------------------------------------------

struct EvaluationResult {
  std::vector<Transition> transitions;  // population order, then rollout order
  std::size_t env_steps = 0;
  std::vector<std::size_t> episode_lengths;
};

enum class EvaluateScope { kAll, kUnevaluated };

/// Runs cfg.rollouts_per_eval noisy episodes per individual; fitness is the
/// mean return. Rollout seeds come from rng.split(lineage_id), so results do
/// not depend on `threads`.
EvaluationResult evaluate(std::span<Individual> population, const Environment& env, const GaConfig& cfg,
                          const Rng& rng, EvaluateScope scope = EvaluateScope::kAll, std::size_t threads = 1);

/// True when a has higher fitness than b, ties to the lower lineage id.
bool fitter(const Individual& a, const Individual& b);

/// The k fittest individuals, deep-copied, best first.
std::vector<Individual> top_k(std::span<const Individual> population, std::size_t k);

/// Index of the fittest entrant.
std::size_t tournament_winner(std::span<const Individual> population, std::span<const std::size_t> entrants);
/// `size` distinct entrants drawn uniformly; returns the winner's index.
std::size_t run_tournament(std::span<const Individual> population, std::size_t size, Rng& rng);

struct ParentPair {
  ActorNet actor;
  CriticNet critic;
  std::uint64_t actor_parent = 0;   // lineage ids
  std::uint64_t critic_parent = 0;
};

/// population.size() - elite_count pairs; actor and critic from independent
/// tournaments.
std::vector<ParentPair> tournament_select(std::span<const Individual> population, const GaConfig& cfg, Rng& rng);

// ---- mutation -------------------------------------------------------------

/// Distillation target network: an Mlp whose outputs are scaled per column
/// (action bounds for an actor, 1 for a critic head).
struct DistillStats {
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

/// Mean over rows of the squared L2 distance between scaled outputs.
double distillation_loss(const Mlp& child, const Mlp& parent, std::span<const double> output_scale,
                         const Tensor& inputs);

/// Gradient of the batch distillation loss w.r.t. the child's parameters.
GradSet distillation_gradient(const Mlp& child, const Mlp& parent, std::span<const double> output_scale,
                              const Tensor& inputs);

/// cfg.distill_updates steps on the child, each on the next cfg.distill_batch
/// rows of `inputs` (cycling). Adam starts from fresh moments on every call.
/// The parent stays frozen.
Mlp distill(Mlp child, const Mlp& parent, std::span<const double> output_scale, const Tensor& inputs,
            const GaConfig& cfg, DistillStats* stats = nullptr);

ActorNet distill_actor(ActorNet child, const ActorNet& parent, const Tensor& states, const GaConfig& cfg,
                       DistillStats* stats = nullptr);
/// Each head regresses onto its own parent head over (state, action) rows.
CriticNet distill_critic(CriticNet child, const CriticNet& parent, const Tensor& state_actions,
                         const GaConfig& cfg);

enum class MutationKind { kAddLayer, kAddNodes, kSafeMutation };
std::string to_string(MutationKind kind);

struct MutationResult {
  ActorNet actor;
  CriticNet critic;
  MutationKind kind = MutationKind::kSafeMutation;
};

/// Grow (add_layer with prob add_layer_prob, else add_nodes) and distill both
/// networks on updates x batch transitions drawn from `replay`.
MutationResult distilled_topology_mutation(const ActorNet& actor, const CriticNet& critic,
                                           const ReplaySnapshot& replay, const GaConfig& cfg, Rng& rng);

/// Per-parameter sensitivity sqrt(sum_k g_k^2), with g_k the gradient of the
/// batch-mean of action k.
GradSet output_sensitivity(const ActorNet& actor, const Tensor& states);

/// SM-G-SUM: theta += Normal(0, sigma) / max(sensitivity, floor). Throws
/// std::invalid_argument if fewer than `min_batch` states are supplied.
ActorNet safe_mutation_smgsum(const ActorNet& actor, const Tensor& states, double sigma, Rng& rng,
                              double sensitivity_floor = 1.0, std::size_t min_batch = 1500);

/// With prob growth_prob a distilled topology mutation, else SM-G-SUM on the
/// actor with the critic carried over. Per-pair streams are rng.split(i).
std::vector<MutationResult> mutate(std::span<const ParentPair> parents, const ReplaySnapshot& replay,
                                   const GaConfig& cfg, const Rng& rng, std::size_t threads = 1);

}  // namespace acn
