#include "acn/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acn {

Episode run_episode(Environment& env, std::vector<double> observation, const ActorNet& actor,
                    double exploration_std, Rng& noise) {
  const EnvSpec& spec = env.spec();
  if (actor.state_dim() != spec.observation_dim || actor.action_dim() != spec.action_dim) {
    throw std::invalid_argument("rollout: actor dimensions do not match environment " + env.name());
  }
  Episode ep;
  ep.transitions.reserve(spec.horizon);
  for (std::size_t t = 0; t < spec.horizon; ++t) {
    std::vector<double> action = actor.act(observation);
    for (std::size_t i = 0; i < action.size(); ++i) {
      const double bound = spec.action_bound[i];
      if (exploration_std > 0.0) action[i] += noise.normal(0.0, exploration_std * bound);
      action[i] = std::clamp(action[i], -bound, bound);
    }
    StepResult r = env.step(action);
    ep.episode_return += r.reward;
    ep.transitions.push_back({std::move(observation), std::move(action), r.reward, r.observation, r.done});
    observation = std::move(r.observation);
    ++ep.steps;
    if (r.done) break;
  }
  return ep;
}

Episode rollout(Environment& env, const ActorNet& actor, double exploration_std, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> obs = env.reset(rng());
  Rng noise = rng.split(1);
  return run_episode(env, std::move(obs), actor, exploration_std, noise);
}

EvalStats evaluate_policy(Environment& env, const ActorNet& actor, std::size_t episodes, std::uint64_t seed) {
  if (episodes == 0) return {};
  std::vector<double> returns;
  returns.reserve(episodes);
  for (std::size_t i = 0; i < episodes; ++i) {
    returns.push_back(rollout(env, actor, 0.0, seed + i).episode_return);
  }
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= static_cast<double>(episodes);
  double var = 0.0;
  for (double r : returns) var += (r - mean) * (r - mean);
  var /= static_cast<double>(episodes);
  return {mean, std::sqrt(var)};
}

}  // namespace acn
