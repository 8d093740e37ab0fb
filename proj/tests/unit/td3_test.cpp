#include "acn/td3.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "acn/errors.hpp"
#include "test_support.hpp"

namespace acn {
namespace {

struct Nets {
  ActorNet actor;
  CriticNet critic;
};

Nets pendulum_nets(std::uint64_t seed, const HiddenWidths& hidden = {16}) {
  Rng rng(seed);
  Rng ra = rng.split(1), rc = rng.split(2);
  return {build_actor(hidden, 3, 1, {2.0}, ra), build_critic(hidden, 3, 1, rc)};
}

// Forces a critic head to output `value` everywhere.
void make_constant(Mlp& head, double value) {
  const std::size_t out = head.spec.hidden.size();
  head.params.at(weight_name(out)).fill(0.0);
  head.params.at(bias_name(out)).fill(value);
}

TransitionBatch batch_of(std::size_t n, Rng& rng, double done) {
  TransitionBatch b;
  b.states = test::random_matrix(n, 3, rng);
  b.actions = test::random_matrix(n, 1, rng);
  b.rewards = Tensor::vector(n);
  for (double& r : b.rewards.data()) r = rng.normal();
  b.next_states = test::random_matrix(n, 3, rng);
  b.dones = Tensor::vector(n, done);
  return b;
}

TEST(Td3Config, Validation) {
  EXPECT_NO_THROW(Td3Config{}.validate());
  Td3Config c;
  c.discount = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.tau = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.tau = 1.0;
  EXPECT_NO_THROW(c.validate());
  c.policy_delay = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(InitPhase, TargetsCopyLiveAndOptimizersFresh) {
  const Nets n = pendulum_nets(1);
  const TrainState s = init_phase(n.actor, n.critic, Td3Config{});
  EXPECT_EQ(s.target_actor, s.actor);
  EXPECT_EQ(s.target_critic, s.critic);
  EXPECT_EQ(s.actor_opt.step, 0u);
  EXPECT_EQ(s.critic_opt.step, 0u);
  EXPECT_EQ(s.updates, 0u);
  Rng rng(2);
  const Tensor st = test::random_matrix(5, 3, rng), ac = test::random_matrix(5, 1, rng);
  EXPECT_EQ(s.target_critic.q(0, st, ac), s.critic.q(0, st, ac));
  const TrainState s2 = init_phase(n.actor, n.critic, Td3Config{});
  EXPECT_EQ(s2.actor, s.actor);
  EXPECT_EQ(s2.critic_opt.first, s.critic_opt.first);
}

TEST(CriticTargets, TwinMinWithDiscount) {
  const Nets n = pendulum_nets(3);
  TrainState s = init_phase(n.actor, n.critic, Td3Config{});
  make_constant(s.target_critic.heads[0], 1.0);
  make_constant(s.target_critic.heads[1], 0.8);
  Rng rng(4);
  TransitionBatch b = batch_of(6, rng, 0.0);
  b.rewards.fill(0.0);
  for (double y : critic_targets(s, b, Td3Config{}, rng)) EXPECT_NEAR(y, 0.792, 1e-15);
}

TEST(CriticTargets, TerminalMaskIgnoresNetworks) {
  const Nets n = pendulum_nets(5);
  TrainState s = init_phase(n.actor, n.critic, Td3Config{});
  make_constant(s.target_critic.heads[0], 1e6);
  make_constant(s.target_critic.heads[1], -1e6);
  Rng rng(6);
  const TransitionBatch b = batch_of(8, rng, 1.0);
  const std::vector<double> y = critic_targets(s, b, Td3Config{}, rng);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_EQ(y[i], b.rewards[i]);
}

TEST(CriticTargets, TwinMinNeverExceedsEitherHead) {
  const Nets n = pendulum_nets(7);
  const TrainState s = init_phase(n.actor, n.critic, Td3Config{});
  Td3Config cfg;
  cfg.target_noise = 0.0;
  Rng rng(8);
  const TransitionBatch b = batch_of(32, rng, 0.0);
  const std::vector<double> y = critic_targets(s, b, cfg, rng);
  const Tensor a = s.target_actor.act(b.next_states);
  const Tensor q1 = s.target_critic.q(0, b.next_states, a);
  const Tensor q2 = s.target_critic.q(1, b.next_states, a);
  for (std::size_t i = 0; i < y.size(); ++i) {
    EXPECT_LE(y[i], b.rewards[i] + cfg.discount * q1[i] + 1e-12);
    EXPECT_LE(y[i], b.rewards[i] + cfg.discount * q2[i] + 1e-12);
    EXPECT_NEAR(y[i], b.rewards[i] + cfg.discount * std::min(q1[i], q2[i]), 1e-12);
  }
}

TEST(SmoothingNoise, ClippedToFractionOfBound) {
  const Td3Config cfg;
  EXPECT_EQ(clip_smoothing_noise(0.7, 1.0, cfg), 0.5);
  EXPECT_EQ(clip_smoothing_noise(-0.7, 1.0, cfg), -0.5);
  EXPECT_EQ(clip_smoothing_noise(0.3, 1.0, cfg), 0.3);
  EXPECT_EQ(clip_smoothing_noise(1.5, 2.0, cfg), 1.0);
}

TEST(SmoothingNoise, TargetActionsStayWithinBound) {
  const Nets n = pendulum_nets(9);
  Td3Config cfg;
  cfg.target_noise = 5.0;
  Rng rng(10);
  const Tensor a = smoothed_target_actions(n.actor, test::random_matrix(200, 3, rng), cfg, rng);
  for (double v : a.data()) EXPECT_LE(std::abs(v), 2.0);
}

TEST(SoftUpdate, TauOneCopiesLive) {
  const Nets n = pendulum_nets(11);
  const Nets m = pendulum_nets(12);
  TrainState s = init_phase(n.actor, n.critic, Td3Config{});
  s.actor = m.actor;
  s.critic = m.critic;
  soft_update_all(s, 1.0);
  EXPECT_EQ(s.target_actor, s.actor);
  EXPECT_EQ(s.target_critic, s.critic);
}

TEST(SoftUpdate, TwiceEqualsOnceWithCompoundedRate) {
  const ParamSet live = pendulum_nets(13).actor.net.params;
  const ParamSet start = pendulum_nets(14).actor.net.params;
  const double tau = 0.3;
  ParamSet twice = start, once = start;
  soft_update(twice, live, tau);
  soft_update(twice, live, tau);
  soft_update(once, live, 1.0 - (1.0 - tau) * (1.0 - tau));
  for (std::size_t i = 0; i < once.size(); ++i) {
    for (std::size_t j = 0; j < once[i].size(); ++j) EXPECT_NEAR(twice[i][j], once[i][j], 1e-14);
  }
}

TEST(TrainStep, PolicyDelayCountsActorUpdates) {
  const Nets n = pendulum_nets(15);
  ReplayMemory mem(3, 1, 10000);
  test::fill_random(mem, "pendulum", 500, 16);
  TrainState s = init_phase(n.actor, n.critic, Td3Config{});
  Rng rng(17);
  for (int k = 0; k < 10; ++k) {
    const StepStats a = train_step(s, mem, Td3Config{}, rng);
    const StepStats b = train_step(s, mem, Td3Config{}, rng);
    EXPECT_FALSE(a.actor_updated);
    EXPECT_TRUE(b.actor_updated);
  }
  EXPECT_EQ(s.updates, 20u);
  EXPECT_EQ(s.actor_updates, 10u);
  EXPECT_EQ(s.critic_opt.step, 20u);
  EXPECT_EQ(s.actor_opt.step, 10u);
}

TEST(TrainStep, EmptyMemoryThrows) {
  const Nets n = pendulum_nets(18);
  ReplayMemory mem(3, 1, 10);
  TrainState s = init_phase(n.actor, n.critic, Td3Config{});
  Rng rng(19);
  EXPECT_THROW(train_step(s, mem, Td3Config{}, rng), EmptyMemoryError);
}

TEST(TrainStep, CriticLossDecreasesOnFrozenBatch) {
  const Nets n = pendulum_nets(20, {32});
  TrainState s = init_phase(n.actor, n.critic, Td3Config{});
  Rng rng(21);
  const TransitionBatch b = batch_of(100, rng, 0.0);
  std::vector<double> losses;
  for (int i = 0; i < 50; ++i) losses.push_back(train_on_batch(s, b, Td3Config{}, rng).critic_loss);
  // Mean over consecutive windows of 10 steps.
  std::vector<double> smooth;
  for (int w = 0; w < 5; ++w) {
    double m = 0.0;
    for (int i = 0; i < 10; ++i) m += losses[w * 10 + i] / 10.0;
    smooth.push_back(m);
  }
  for (std::size_t w = 1; w < smooth.size(); ++w) EXPECT_LT(smooth[w], smooth[w - 1]);
}

TEST(TrainStep, ActorStaysWithinBoundAfterUpdates) {
  const Nets n = pendulum_nets(22);
  ReplayMemory mem(3, 1, 10000);
  test::fill_random(mem, "pendulum", 1000, 23);
  Td3Config cfg;
  cfg.actor_step_size = 0.05;
  TrainState s = init_phase(n.actor, n.critic, cfg);
  Rng rng(24);
  for (int i = 0; i < 200; ++i) train_step(s, mem, cfg, rng);
  const Tensor acts = s.actor.act(test::random_matrix(100, 3, rng, 5.0));
  for (double v : acts.data()) EXPECT_LE(std::abs(v), 2.0);
}

TEST(TrainPhase, ZeroStepsReturnsInputs) {
  const Nets n = pendulum_nets(25);
  ReplayMemory mem(3, 1, 1000);
  test::fill_random(mem, "pendulum", 200, 26);
  Rng rng(27);
  const auto [a, c] = train_phase(n.actor, n.critic, mem, 0, Td3Config{}, rng);
  EXPECT_EQ(a, n.actor);
  EXPECT_EQ(c, n.critic);
}

TEST(TrainPhase, DeterministicGivenSeed) {
  const Nets n = pendulum_nets(28);
  ReplayMemory mem(3, 1, 1000);
  test::fill_random(mem, "pendulum", 400, 29);
  Rng r1(30), r2(30);
  const auto x = train_phase(n.actor, n.critic, mem, 20, Td3Config{}, r1);
  const auto y = train_phase(n.actor, n.critic, mem, 20, Td3Config{}, r2);
  EXPECT_EQ(x.first, y.first);
  EXPECT_EQ(x.second, y.second);
  EXPECT_NE(x.first, n.actor);
}

TEST(TrainPhase, GrownNetworksTrain) {
  const Nets n = pendulum_nets(31);
  Rng grow(32);
  auto [a, c] = add_layer(n.actor, n.critic, grow);
  std::tie(a, c) = add_nodes(a, c, 0, 8, grow);
  ReplayMemory mem(3, 1, 1000);
  test::fill_random(mem, "pendulum", 300, 33);
  Rng rng(34);
  EXPECT_NO_THROW(train_phase(a, c, mem, 10, Td3Config{}, rng));
}

TEST(ReinitMode, ParseAndFormat) {
  for (ReinitMode m : {ReinitMode::kNone, ReinitMode::kOptimizer, ReinitMode::kTarget, ReinitMode::kBoth}) {
    EXPECT_EQ(parse_reinit_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_reinit_mode("targets"), std::invalid_argument);
}

BaselineConfig short_baseline(ReinitMode mode) {
  BaselineConfig b;
  b.env = "integrator";
  b.hidden = {16};
  b.total_steps = 1200;
  b.warmup_steps = 200;
  b.reinit = mode;
  b.reinit_interval = 500;
  b.eval_interval = 400;
  b.eval_episodes = 2;
  b.seed = 3;
  return b;
}

TEST(Baseline, ReinitTargetMakesTargetsEqualLive) {
  std::vector<std::size_t> at;
  BaselineHooks hooks;
  hooks.on_reinit = [&](std::size_t t, const TrainState& s) {
    at.push_back(t);
    EXPECT_EQ(s.target_actor, s.actor);
    EXPECT_EQ(s.target_critic, s.critic);
    EXPECT_NE(s.critic_opt.step, 0u);
  };
  const BaselineResult r = run_td3_baseline(short_baseline(ReinitMode::kTarget), Td3Config{}, hooks);
  EXPECT_EQ(at, (std::vector<std::size_t>{500, 1000}));
  EXPECT_EQ(r.reinit_events, 2u);
}

TEST(Baseline, ReinitOptimizerZeroesMoments) {
  BaselineHooks hooks;
  hooks.on_reinit = [](std::size_t, const TrainState& s) {
    EXPECT_EQ(s.actor_opt.step, 0u);
    EXPECT_EQ(s.critic_opt.step, 0u);
    EXPECT_NE(s.target_critic, s.critic);
  };
  EXPECT_EQ(run_td3_baseline(short_baseline(ReinitMode::kOptimizer), Td3Config{}, hooks).reinit_events, 2u);
}

TEST(Baseline, NoneNeverReinitializesAndLogsCurve) {
  bool called = false;
  BaselineHooks hooks;
  hooks.on_reinit = [&](std::size_t, const TrainState&) { called = true; };
  const BaselineResult r = run_td3_baseline(short_baseline(ReinitMode::kNone), Td3Config{}, hooks);
  EXPECT_FALSE(called);
  ASSERT_EQ(r.curve.size(), 3u);  // 400, 800, 1200
  EXPECT_EQ(r.curve.front().step, 400u);
  EXPECT_EQ(r.curve.back().step, 1200u);
}

TEST(Baseline, Deterministic) {
  const BaselineResult a = run_td3_baseline(short_baseline(ReinitMode::kBoth), Td3Config{});
  const BaselineResult b = run_td3_baseline(short_baseline(ReinitMode::kBoth), Td3Config{});
  ASSERT_EQ(a.curve.size(), b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) EXPECT_EQ(a.curve[i].eval_return_mean, b.curve[i].eval_return_mean);
  EXPECT_EQ(a.actor, b.actor);
}

}  // namespace
}  // namespace acn
