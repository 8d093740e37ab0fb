#include <algorithm>
#include <stdexcept>
#include <string>

#include "acn/nets.hpp"

namespace acn {

namespace {

void copy_layer(const ParamSet& from, ParamSet& to, std::size_t layer, bool hidden) {
  to.add(weight_name(layer), from.at(weight_name(layer)));
  to.add(bias_name(layer), from.at(bias_name(layer)));
  if (hidden) {
    to.add(ln_gain_name(layer), from.at(ln_gain_name(layer)));
    to.add(ln_bias_name(layer), from.at(ln_bias_name(layer)));
  }
}

Tensor extend_vector(const Tensor& v, std::size_t count, double fill) {
  std::vector<double> data(v.data().begin(), v.data().end());
  const std::size_t n = v.size() + count;
  data.resize(n, fill);
  return Tensor({n}, std::move(data));
}

// Appends `count` He-initialized columns to a (rows x cols) matrix.
Tensor extend_columns(const Tensor& w, std::size_t count, std::size_t fan_in, Rng& rng) {
  const Tensor fresh = he_init(fan_in, {w.rows(), count}, rng);
  Tensor out = Tensor::matrix(w.rows(), w.cols() + count);
  for (std::size_t r = 0; r < w.rows(); ++r) {
    auto o = out.row(r);
    std::copy(w.row(r).begin(), w.row(r).end(), o.begin());
    std::copy(fresh.row(r).begin(), fresh.row(r).end(), o.begin() + static_cast<std::ptrdiff_t>(w.cols()));
  }
  return out;
}

// Appends `count` He-initialized rows.
Tensor extend_rows(const Tensor& w, std::size_t count, std::size_t fan_in, Rng& rng) {
  const Tensor fresh = he_init(fan_in, {count, w.cols()}, rng);
  std::vector<double> data(w.data().begin(), w.data().end());
  data.insert(data.end(), fresh.data().begin(), fresh.data().end());
  return Tensor({w.rows() + count, w.cols()}, std::move(data));
}

}  // namespace

Mlp grow_layer(const Mlp& parent, Rng& rng) {
  const TopologySpec& ps = parent.spec;
  ps.validate();
  const std::size_t depth = ps.hidden.size();
  const std::size_t width = ps.hidden.back();

  Mlp child;
  child.head = parent.head;
  child.spec = ps;
  child.spec.hidden.push_back(width);

  for (std::size_t l = 0; l < depth; ++l) copy_layer(parent.params, child.params, l, true);
  child.params.add(weight_name(depth), he_init(width, {width, width}, rng));
  child.params.add(bias_name(depth), Tensor::vector(width));
  child.params.add(ln_gain_name(depth), Tensor::vector(width, 1.0));
  child.params.add(ln_bias_name(depth), Tensor::vector(width));
  // The output layer keeps its shape but now reads the new layer.
  child.params.add(weight_name(depth + 1), he_init(width, {width, ps.output_width}, rng));
  child.params.add(bias_name(depth + 1), parent.params.at(bias_name(depth)));
  return child;
}

Mlp grow_nodes(const Mlp& parent, std::size_t layer, std::size_t count, Rng& rng) {
  const TopologySpec& ps = parent.spec;
  ps.validate();
  if (layer >= ps.hidden.size()) {
    throw std::invalid_argument("grow_nodes: hidden layer index " + std::to_string(layer) + " out of range");
  }
  if (count == 0) throw std::invalid_argument("grow_nodes: count must be >= 1");

  Mlp child;
  child.head = parent.head;
  child.spec = ps;
  child.spec.hidden[layer] += count;
  const std::size_t new_width = child.spec.hidden[layer];

  for (std::size_t l = 0; l < child.spec.layer_count(); ++l) {
    const bool hidden = l < ps.hidden.size();
    if (l == layer) {
      child.params.add(weight_name(l),
                       extend_columns(parent.params.at(weight_name(l)), count, ps.fan_in(l), rng));
      child.params.add(bias_name(l), extend_vector(parent.params.at(bias_name(l)), count, 0.0));
      child.params.add(ln_gain_name(l), extend_vector(parent.params.at(ln_gain_name(l)), count, 1.0));
      child.params.add(ln_bias_name(l), extend_vector(parent.params.at(ln_bias_name(l)), count, 0.0));
    } else if (l == layer + 1) {
      child.params.add(weight_name(l), extend_rows(parent.params.at(weight_name(l)), count, new_width, rng));
      child.params.add(bias_name(l), parent.params.at(bias_name(l)));
      if (hidden) {
        child.params.add(ln_gain_name(l), parent.params.at(ln_gain_name(l)));
        child.params.add(ln_bias_name(l), parent.params.at(ln_bias_name(l)));
      }
    } else {
      copy_layer(parent.params, child.params, l, hidden);
    }
  }
  return child;
}

std::pair<ActorNet, CriticNet> add_layer(const ActorNet& actor, const CriticNet& critic, Rng& rng) {
  ActorNet a{grow_layer(actor.net, rng), actor.action_bound};
  CriticNet c = critic;
  for (auto& head : c.heads) head = grow_layer(head, rng);
  return {std::move(a), std::move(c)};
}

std::pair<ActorNet, CriticNet> add_nodes(const ActorNet& actor, const CriticNet& critic, std::size_t layer,
                                         std::size_t count, Rng& rng) {
  if (layer >= actor.spec().hidden.size()) {
    throw std::invalid_argument("add_nodes: hidden layer index " + std::to_string(layer) + " out of range");
  }
  ActorNet a{grow_nodes(actor.net, layer, count, rng), actor.action_bound};
  CriticNet c = critic;
  const std::size_t critic_layer = std::min(layer, critic.spec().hidden.size() - 1);
  for (auto& head : c.heads) head = grow_nodes(head, critic_layer, count, rng);
  return {std::move(a), std::move(c)};
}

}  // namespace acn
