#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acn/envs.hpp"
#include "acn/nets.hpp"
#include "acn/optimizer.hpp"
#include "acn/replay.hpp"
#include "acn/rng.hpp"

namespace acn {

struct Td3Config {
  double discount = 0.99;
  double tau = 0.005;
  double target_noise = 0.2;  // fraction of the action bound
  double noise_clip = 0.5;    // fraction of the action bound
  std::size_t policy_delay = 2;
  std::size_t batch_size = 100;
  double actor_step_size = 1e-3;
  double critic_step_size = 1e-3;
  double exploration_std = 0.1;  // fraction of the action bound

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct TrainState {
  ActorNet actor;
  CriticNet critic;
  ActorNet target_actor;
  CriticNet target_critic;
  MomentState actor_opt;
  MomentState critic_opt;
  std::uint64_t updates = 0;
  std::uint64_t actor_updates = 0;
};

/// Fresh optimizers and targets copied from the live networks.
TrainState init_phase(ActorNet actor, CriticNet critic, const Td3Config& cfg);

/// clip(eps, +-noise_clip * bound) for a raw smoothing draw.
double clip_smoothing_noise(double eps, double bound, const Td3Config& cfg);

/// Smoothed target actions for a batch of next states.
Tensor smoothed_target_actions(const ActorNet& target_actor, const Tensor& next_states, const Td3Config& cfg,
                               Rng& rng);

/// y = r + (1 - done) * discount * min(Q1'(s', a~), Q2'(s', a~)).
std::vector<double> critic_targets(const TrainState& state, const TransitionBatch& batch, const Td3Config& cfg,
                                   Rng& rng);

struct StepStats {
  double critic_loss = 0.0;
  bool actor_updated = false;
};

/// One minibatch update from an explicit batch.
StepStats train_on_batch(TrainState& state, const TransitionBatch& batch, const Td3Config& cfg, Rng& rng);
/// One minibatch update sampled from `replay`. Throws EmptyMemoryError if empty.
StepStats train_step(TrainState& state, const ReplaySnapshot& replay, const Td3Config& cfg, Rng& rng);
StepStats train_step(TrainState& state, const ReplayMemory& replay, const Td3Config& cfg, Rng& rng);

/// target <- (1 - tau) * target + tau * live
void soft_update(ParamSet& target, const ParamSet& live, double tau);
void soft_update_all(TrainState& state, double tau);
/// Targets become exact copies of the live networks.
void recreate_targets(TrainState& state);
void reset_optimizers(TrainState& state);

/// init_phase, `steps` train steps on a snapshot taken now, live networks back.
std::pair<ActorNet, CriticNet> train_phase(ActorNet actor, CriticNet critic, const ReplayMemory& replay,
                                           std::size_t steps, const Td3Config& cfg, Rng& rng);

enum class ReinitMode { kNone, kOptimizer, kTarget, kBoth };
std::string to_string(ReinitMode mode);
/// "none", "optimizer", "target", "both"; throws std::invalid_argument otherwise.
ReinitMode parse_reinit_mode(std::string_view text);

struct BaselineConfig {
  std::string env = "pendulum";
  HiddenWidths hidden = {64};
  std::size_t total_steps = 30'000;
  std::size_t warmup_steps = 1'000;
  ReinitMode reinit = ReinitMode::kNone;
  std::size_t reinit_interval = 10'000;
  std::size_t eval_interval = 1'000;
  std::size_t eval_episodes = 10;
  std::size_t replay_capacity = ReplayMemory::kDefaultCapacity;
  std::uint64_t seed = 1;
};

struct CurvePoint {
  std::size_t step = 0;
  double eval_return_mean = 0.0;
  double eval_return_std = 0.0;
  double last_episode_return = 0.0;  // most recent exploration episode
};

struct BaselineResult {
  std::vector<CurvePoint> curve;
  ActorNet actor;
  CriticNet critic;
  std::size_t reinit_events = 0;
};

/// Observer hooks for the standalone loop; any may be empty.
struct BaselineHooks {
  std::function<void(const CurvePoint&)> on_eval;
  /// Called right after a re-initialization at env step t.
  std::function<void(std::size_t t, const TrainState&)> on_reinit;
};

/// Single-agent TD3: warmup with uniform random actions, then one train step
/// per env step with Gaussian exploration, periodic re-initialization and
/// noise-free evaluation.
BaselineResult run_td3_baseline(const BaselineConfig& base, const Td3Config& cfg, const BaselineHooks& hooks = {});

}  // namespace acn
