#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "acn/envs.hpp"
#include "acn/nets.hpp"
#include "acn/rng.hpp"

namespace acn {

struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;

  bool operator==(const Transition&) const = default;
};

struct Episode {
  double episode_return = 0.0;
  std::vector<Transition> transitions;
  std::size_t steps = 0;
};

/// Runs one episode after env.reset(seed). Actions are
/// clip(actor(s) + eps, +-bound) with eps ~ Normal(0, exploration_std * bound).
Episode rollout(Environment& env, const ActorNet& actor, double exploration_std, std::uint64_t seed);

/// Same, continuing from an observation the caller already produced
/// (e.g. via set_state). Noise comes from `noise`.
Episode run_episode(Environment& env, std::vector<double> observation, const ActorNet& actor,
                    double exploration_std, Rng& noise);

/// Mean and population std of noise-free returns over `episodes` resets
/// seeded seed, seed+1, ...
struct EvalStats {
  double mean = 0.0;
  double stddev = 0.0;
};
EvalStats evaluate_policy(Environment& env, const ActorNet& actor, std::size_t episodes, std::uint64_t seed);

}  // namespace acn
