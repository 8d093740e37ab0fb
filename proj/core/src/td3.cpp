#include "acn/td3.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "acn/rollout.hpp"

namespace acn {

void Td3Config::validate() const {
  if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("td3: discount must be in (0, 1)");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("td3: tau must be in (0, 1]");
  if (policy_delay < 1) throw std::invalid_argument("td3: policy delay must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("td3: batch size must be >= 1");
  if (!(actor_step_size > 0.0) || !(critic_step_size > 0.0)) {
    throw std::invalid_argument("td3: step sizes must be positive");
  }
  if (target_noise < 0.0 || noise_clip < 0.0 || exploration_std < 0.0) {
    throw std::invalid_argument("td3: noise parameters must be non-negative");
  }
}

TrainState init_phase(ActorNet actor, CriticNet critic, const Td3Config& cfg) {
  TrainState s;
  s.actor = std::move(actor);
  s.critic = std::move(critic);
  s.target_actor = s.actor;
  s.target_critic = s.critic;
  s.actor_opt = make_moment_state(s.actor.net.params, AdamConfig{.step_size = cfg.actor_step_size});
  const ParamSet* heads[] = {&s.critic.heads[0].params, &s.critic.heads[1].params};
  s.critic_opt = make_moment_state(heads, AdamConfig{.step_size = cfg.critic_step_size});
  return s;
}

double clip_smoothing_noise(double eps, double bound, const Td3Config& cfg) {
  const double limit = cfg.noise_clip * bound;
  return std::clamp(eps, -limit, limit);
}

Tensor smoothed_target_actions(const ActorNet& target_actor, const Tensor& next_states, const Td3Config& cfg,
                               Rng& rng) {
  Tensor actions = target_actor.act(next_states);
  const std::size_t d = actions.cols();
  for (std::size_t r = 0; r < actions.rows(); ++r) {
    auto row = actions.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      const double bound = target_actor.action_bound[c];
      const double eps = clip_smoothing_noise(rng.normal(0.0, cfg.target_noise * bound), bound, cfg);
      row[c] = std::clamp(row[c] + eps, -bound, bound);
    }
  }
  return actions;
}

std::vector<double> critic_targets(const TrainState& state, const TransitionBatch& batch, const Td3Config& cfg,
                                   Rng& rng) {
  if (batch.size() == 0) throw std::invalid_argument("critic_targets: empty batch");
  const Tensor next_actions = smoothed_target_actions(state.target_actor, batch.next_states, cfg, rng);
  const Tensor q1 = state.target_critic.q(0, batch.next_states, next_actions);
  const Tensor q2 = state.target_critic.q(1, batch.next_states, next_actions);
  std::vector<double> y(batch.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double not_done = 1.0 - batch.dones[i];
    y[i] = not_done == 0.0 ? batch.rewards[i]
                           : batch.rewards[i] + not_done * cfg.discount * std::min(q1[i], q2[i]);
  }
  return y;
}

void soft_update(ParamSet& target, const ParamSet& live, double tau) {
  if (target.size() != live.size()) throw std::invalid_argument("soft_update: parameter sets differ");
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (!target[i].same_shape(live[i])) throw std::invalid_argument("soft_update: shape mismatch");
    auto t = target[i].data();
    auto l = live[i].data();
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = (1.0 - tau) * t[k] + tau * l[k];
  }
}

void soft_update_all(TrainState& state, double tau) {
  soft_update(state.target_actor.net.params, state.actor.net.params, tau);
  for (std::size_t h = 0; h < 2; ++h) {
    soft_update(state.target_critic.heads[h].params, state.critic.heads[h].params, tau);
  }
}

void recreate_targets(TrainState& state) {
  state.target_actor = state.actor;
  state.target_critic = state.critic;
}

void reset_optimizers(TrainState& state) {
  moment_reset(state.actor_opt);
  moment_reset(state.critic_opt);
}

StepStats train_on_batch(TrainState& state, const TransitionBatch& batch, const Td3Config& cfg, Rng& rng) {
  const std::size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("train_on_batch: empty batch");
  const double inv_n = 1.0 / static_cast<double>(n);
  StepStats stats;

  // Critic regression on the shared clipped double-Q target.
  const std::vector<double> y = critic_targets(state, batch, cfg, rng);
  const Tensor critic_in = concat_columns(batch.states, batch.actions);
  std::array<GradSet, 2> critic_grads;
  for (std::size_t h = 0; h < 2; ++h) {
    const Mlp& head = state.critic.heads[h];
    const MlpTape tape = mlp_forward_tape(head.params, head.spec, critic_in, head.head);
    Tensor upstream = Tensor::matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double err = tape.output[i] - y[i];
      stats.critic_loss += err * err * inv_n;
      upstream[i] = 2.0 * err * inv_n;
    }
    critic_grads[h] = mlp_backward(tape, upstream).params;
  }
  {
    ParamSet* p[] = {&state.critic.heads[0].params, &state.critic.heads[1].params};
    const GradSet* g[] = {&critic_grads[0], &critic_grads[1]};
    moment_step(state.critic_opt, p, g);
  }

  state.updates += 1;
  if (state.updates % cfg.policy_delay != 0) return stats;

  // Deterministic policy gradient through Q1.
  const Mlp& actor = state.actor.net;
  const MlpTape actor_tape = mlp_forward_tape(actor.params, actor.spec, batch.states, actor.head);
  Tensor actions = actor_tape.output;
  const std::size_t act_dim = actions.cols();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < act_dim; ++c) actions(r, c) *= state.actor.action_bound[c];
  }
  const Mlp& q1 = state.critic.heads[0];
  const MlpTape q_tape = mlp_forward_tape(q1.params, q1.spec, concat_columns(batch.states, actions), q1.head);
  const Tensor q_upstream = Tensor::matrix(n, 1, -inv_n);
  const Tensor dq_dinput = mlp_backward(q_tape, q_upstream, true).input;

  const std::size_t obs_dim = batch.states.cols();
  Tensor actor_upstream = Tensor::matrix(n, act_dim);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < act_dim; ++c) {
      actor_upstream(r, c) = dq_dinput(r, obs_dim + c) * state.actor.action_bound[c];
    }
  }
  const GradSet actor_grads = mlp_backward(actor_tape, actor_upstream).params;
  moment_step(state.actor_opt, state.actor.net.params, actor_grads);
  state.actor_updates += 1;
  stats.actor_updated = true;

  soft_update_all(state, cfg.tau);
  return stats;
}

StepStats train_step(TrainState& state, const ReplaySnapshot& replay, const Td3Config& cfg, Rng& rng) {
  const TransitionBatch batch = replay.sample_batch(cfg.batch_size, rng);
  return train_on_batch(state, batch, cfg, rng);
}

StepStats train_step(TrainState& state, const ReplayMemory& replay, const Td3Config& cfg, Rng& rng) {
  return train_step(state, replay.snapshot(), cfg, rng);
}

std::pair<ActorNet, CriticNet> train_phase(ActorNet actor, CriticNet critic, const ReplayMemory& replay,
                                           std::size_t steps, const Td3Config& cfg, Rng& rng) {
  if (steps == 0) return {std::move(actor), std::move(critic)};
  const ReplaySnapshot snapshot = replay.snapshot();
  TrainState state = init_phase(std::move(actor), std::move(critic), cfg);
  for (std::size_t i = 0; i < steps; ++i) train_step(state, snapshot, cfg, rng);
  return {std::move(state.actor), std::move(state.critic)};
}

std::string to_string(ReinitMode mode) {
  switch (mode) {
    case ReinitMode::kNone: return "none";
    case ReinitMode::kOptimizer: return "optimizer";
    case ReinitMode::kTarget: return "target";
    case ReinitMode::kBoth: return "both";
  }
  return "none";
}

ReinitMode parse_reinit_mode(std::string_view text) {
  if (text == "none") return ReinitMode::kNone;
  if (text == "optimizer") return ReinitMode::kOptimizer;
  if (text == "target") return ReinitMode::kTarget;
  if (text == "both") return ReinitMode::kBoth;
  throw std::invalid_argument("unknown reinit mode \"" + std::string(text) +
                              "\" (expected none, optimizer, target or both)");
}

BaselineResult run_td3_baseline(const BaselineConfig& base, const Td3Config& cfg, const BaselineHooks& hooks) {
  cfg.validate();
  auto env = make_environment(base.env);
  auto eval_env = env->clone();
  const EnvSpec& spec = env->spec();

  const Rng root(base.seed);
  Rng init_rng = root.split(1);
  Rng act_rng = root.split(2);
  Rng train_rng = root.split(3);
  Rng reset_rng = root.split(4);
  const std::uint64_t eval_seed = root.split(5)();

  TrainState state = init_phase(build_actor(base.hidden, spec.observation_dim, spec.action_dim, spec.action_bound, init_rng),
                                build_critic(base.hidden, spec.observation_dim, spec.action_dim, init_rng), cfg);
  ReplayMemory replay(spec.observation_dim, spec.action_dim, base.replay_capacity);

  BaselineResult result;
  double last_episode_return = 0.0;
  double episode_return = 0.0;
  std::size_t episode_steps = 0;
  std::vector<double> obs = env->reset(reset_rng());

  for (std::size_t t = 1; t <= base.total_steps; ++t) {
    std::vector<double> action(spec.action_dim);
    if (t <= base.warmup_steps) {
      for (std::size_t i = 0; i < action.size(); ++i) {
        action[i] = act_rng.uniform(-spec.action_bound[i], spec.action_bound[i]);
      }
    } else {
      action = state.actor.act(obs);
      for (std::size_t i = 0; i < action.size(); ++i) {
        const double bound = spec.action_bound[i];
        action[i] = std::clamp(action[i] + act_rng.normal(0.0, cfg.exploration_std * bound), -bound, bound);
      }
    }
    StepResult r = env->step(action);
    replay.push(Transition{obs, action, r.reward, r.observation, r.done});
    episode_return += r.reward;
    ++episode_steps;
    obs = std::move(r.observation);
    if (r.done || episode_steps == spec.horizon) {
      last_episode_return = episode_return;
      episode_return = 0.0;
      episode_steps = 0;
      obs = env->reset(reset_rng());
    }

    if (t > base.warmup_steps) train_step(state, replay, cfg, train_rng);

    if (base.reinit != ReinitMode::kNone && base.reinit_interval > 0 && t % base.reinit_interval == 0) {
      if (base.reinit == ReinitMode::kOptimizer || base.reinit == ReinitMode::kBoth) reset_optimizers(state);
      if (base.reinit == ReinitMode::kTarget || base.reinit == ReinitMode::kBoth) recreate_targets(state);
      ++result.reinit_events;
      if (hooks.on_reinit) hooks.on_reinit(t, state);
    }

    if (base.eval_interval > 0 && (t % base.eval_interval == 0 || t == base.total_steps)) {
      const EvalStats eval = evaluate_policy(*eval_env, state.actor, base.eval_episodes, eval_seed);
      CurvePoint point{t, eval.mean, eval.stddev, last_episode_return};
      result.curve.push_back(point);
      if (hooks.on_eval) hooks.on_eval(point);
    }
  }
  result.actor = std::move(state.actor);
  result.critic = std::move(state.critic);
  return result;
}

}  // namespace acn
