#include <stdexcept>

#include "acn/errors.hpp"
#include "acn/evolution.hpp"
#include "acn/optimizer.hpp"

namespace acn {

namespace {

Tensor scaled(Tensor out, std::span<const double> scale) {
  const std::size_t d = out.cols();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < d; ++c) row[c] *= scale[c];
  }
  return out;
}

void check_pair(const Mlp& child, const Mlp& parent, std::span<const double> scale) {
  if (child.spec.input_width != parent.spec.input_width || child.spec.output_width != parent.spec.output_width) {
    throw std::invalid_argument("distill: child and parent must share input/output widths");
  }
  if (scale.size() != child.spec.output_width) throw std::invalid_argument("distill: one scale per output");
}

Tensor rows_slice(const Tensor& data, std::size_t start, std::size_t count) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  Tensor out = Tensor::matrix(count, d);
  for (std::size_t r = 0; r < count; ++r) {
    const auto src = data.row((start + r) % n);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace

double distillation_loss(const Mlp& child, const Mlp& parent, std::span<const double> output_scale,
                         const Tensor& inputs) {
  check_pair(child, parent, output_scale);
  const Tensor target = scaled(parent.forward(inputs), output_scale);
  const Tensor pred = scaled(child.forward(inputs), output_scale);
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) loss += (pred[i] - target[i]) * (pred[i] - target[i]);
  return loss / static_cast<double>(inputs.rows());
}

GradSet distillation_gradient(const Mlp& child, const Mlp& parent, std::span<const double> output_scale,
                              const Tensor& inputs) {
  check_pair(child, parent, output_scale);
  const Tensor target = scaled(parent.forward(inputs), output_scale);
  const MlpTape tape = mlp_forward_tape(child.params, child.spec, inputs, child.head);
  const std::size_t n = inputs.rows();
  const std::size_t d = tape.output.cols();
  Tensor upstream = Tensor::matrix(n, d);
  const double k = 2.0 / static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double residual = output_scale[c] * tape.output(r, c) - target(r, c);
      upstream(r, c) = k * residual * output_scale[c];
    }
  }
  return mlp_backward(tape, upstream).params;
}

Mlp distill(Mlp child, const Mlp& parent, std::span<const double> output_scale, const Tensor& inputs,
            const GaConfig& cfg, DistillStats* stats) {
  check_pair(child, parent, output_scale);
  if (inputs.empty() || inputs.rows() == 0) throw std::invalid_argument("distill: no input data");
  const std::size_t batch = cfg.distill_batch;
  if (stats) stats->initial_loss = distillation_loss(child, parent, output_scale, rows_slice(inputs, 0, batch));
  MomentState moments = make_moment_state(child.params, AdamConfig{cfg.distill_step_size});
  std::size_t cursor = 0;
  std::size_t last_start = 0;
  for (std::size_t u = 0; u < cfg.distill_updates; ++u) {
    const Tensor x = rows_slice(inputs, cursor, batch);
    last_start = cursor;
    cursor = (cursor + batch) % inputs.rows();
    const GradSet g = distillation_gradient(child, parent, output_scale, x);
    if (!g.all_finite()) throw NumericalError("distill: non-finite gradient");
    if (cfg.distill_optimizer == DistillOptimizer::kAdam) {
      moment_step(moments, child.params, g);
      continue;
    }
    for (std::size_t i = 0; i < child.params.size(); ++i) {
      auto p = child.params[i].data();
      auto gi = g[i].data();
      for (std::size_t j = 0; j < p.size(); ++j) p[j] -= cfg.distill_step_size * gi[j];
    }
  }
  if (stats) stats->final_loss = distillation_loss(child, parent, output_scale, rows_slice(inputs, last_start, batch));
  return child;
}

ActorNet distill_actor(ActorNet child, const ActorNet& parent, const Tensor& states, const GaConfig& cfg,
                       DistillStats* stats) {
  child.net = distill(std::move(child.net), parent.net, parent.action_bound, states, cfg, stats);
  return child;
}

CriticNet distill_critic(CriticNet child, const CriticNet& parent, const Tensor& state_actions, const GaConfig& cfg) {
  const double unit[] = {1.0};
  for (std::size_t h = 0; h < 2; ++h) {
    child.heads[h] = distill(std::move(child.heads[h]), parent.heads[h], unit, state_actions, cfg);
  }
  return child;
}

MutationResult distilled_topology_mutation(const ActorNet& actor, const CriticNet& critic,
                                           const ReplaySnapshot& replay, const GaConfig& cfg, Rng& rng) {
  if (replay.empty()) throw EmptyMemoryError("distilled_topology_mutation: replay memory is empty");
  MutationResult out;
  if (rng.bernoulli(cfg.add_layer_prob)) {
    auto [a, c] = add_layer(actor, critic, rng);
    out = {std::move(a), std::move(c), MutationKind::kAddLayer};
  } else {
    const std::size_t layer = rng.uniform_index(actor.spec().hidden.size());
    const std::size_t count = cfg.node_counts[rng.uniform_index(cfg.node_counts.size())];
    auto [a, c] = add_nodes(actor, critic, layer, count, rng);
    out = {std::move(a), std::move(c), MutationKind::kAddNodes};
  }
  if (cfg.distill_updates == 0) return out;
  const TransitionBatch pool = replay.sample_batch(cfg.distill_updates * cfg.distill_batch, rng);
  out.actor = distill_actor(std::move(out.actor), actor, pool.states, cfg);
  out.critic = distill_critic(std::move(out.critic), critic, concat_columns(pool.states, pool.actions), cfg);
  return out;
}

}  // namespace acn
