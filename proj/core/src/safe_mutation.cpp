#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "acn/evolution.hpp"

namespace acn {

GradSet output_sensitivity(const ActorNet& actor, const Tensor& states) {
  const Mlp& net = actor.net;
  const MlpTape tape = mlp_forward_tape(net.params, net.spec, states, net.head);
  const std::size_t n = states.rows();
  const std::size_t k_out = actor.action_dim();

  GradSet sq = GradSet::zeros_like(net.params);
  for (std::size_t k = 0; k < k_out; ++k) {
    // d/dtheta of mean_i action_k(s_i); the action is bound_k * tanh(.).
    Tensor upstream = Tensor::matrix(n, k_out);
    const double w = actor.action_bound[k] / static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) upstream(r, k) = w;
    const GradSet g = mlp_backward(tape, upstream).params;
    for (std::size_t i = 0; i < sq.size(); ++i) {
      auto acc = sq[i].data();
      auto gi = g[i].data();
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += gi[j] * gi[j];
    }
  }
  for (std::size_t i = 0; i < sq.size(); ++i) {
    for (double& v : sq[i].data()) v = std::sqrt(v);
  }
  return sq;
}

ActorNet safe_mutation_smgsum(const ActorNet& actor, const Tensor& states, double sigma, Rng& rng,
                              double sensitivity_floor, std::size_t min_batch) {
  if (states.rows() < min_batch) {
    throw std::invalid_argument("safe_mutation: need at least " + std::to_string(min_batch) + " states, got " +
                                std::to_string(states.rows()));
  }
  const GradSet sensitivity = output_sensitivity(actor, states);
  ActorNet child = actor;
  for (std::size_t i = 0; i < child.net.params.size(); ++i) {
    auto p = child.net.params[i].data();
    auto s = sensitivity[i].data();
    for (std::size_t j = 0; j < p.size(); ++j) {
      p[j] += rng.normal(0.0, sigma) / std::max(s[j], sensitivity_floor);
    }
  }
  return child;
}

}  // namespace acn
