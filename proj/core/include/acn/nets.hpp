#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "acn/autodiff.hpp"
#include "acn/params.hpp"
#include "acn/rng.hpp"
#include "acn/tensor.hpp"
#include "acn/topology.hpp"

namespace acn {

/// One dense network: topology, parameters and output head. Plain value type;
/// copies are deep and independent.
struct Mlp {
  TopologySpec spec;
  ParamSet params;
  Head head = Head::kIdentity;

  Tensor forward(const Tensor& input) const { return mlp_forward(params, spec, input, head); }
  std::size_t parameter_count() const { return params.scalar_count(); }

  bool operator==(const Mlp&) const = default;
};

Mlp build_mlp(const TopologySpec& spec, Head head, Rng& rng);

/// Policy network; actions are bound * tanh(.) elementwise.
struct ActorNet {
  Mlp net;
  std::vector<double> action_bound;

  const TopologySpec& spec() const { return net.spec; }
  std::size_t state_dim() const { return net.spec.input_width; }
  std::size_t action_dim() const { return net.spec.output_width; }

  /// Batch of states (rows) to batch of actions.
  Tensor act(const Tensor& states) const;
  std::vector<double> act(std::span<const double> state) const;
  std::size_t parameter_count() const { return net.parameter_count(); }

  bool operator==(const ActorNet&) const = default;
};

/// Twin Q-networks over concatenated (state, action) inputs. Both heads share
/// one topology.
struct CriticNet {
  std::array<Mlp, 2> heads;
  std::size_t state_dim = 0;
  std::size_t action_dim = 0;

  const TopologySpec& spec() const { return heads[0].spec; }
  /// (batch x 1) Q-values of head `h`.
  Tensor q(std::size_t h, const Tensor& states, const Tensor& actions) const;
  std::size_t parameter_count() const { return heads[0].parameter_count() + heads[1].parameter_count(); }

  bool operator==(const CriticNet&) const = default;
};

/// Row-wise [states | actions].
Tensor concat_columns(const Tensor& left, const Tensor& right);

ActorNet build_actor(const HiddenWidths& hidden, std::size_t state_dim, std::size_t action_dim,
                     std::vector<double> action_bound, Rng& rng);
CriticNet build_critic(const HiddenWidths& hidden, std::size_t state_dim, std::size_t action_dim, Rng& rng);

// Structural growth. Surviving parameters are copied verbatim; new weights are
// He-initialized, new biases are 0, new normalization gains 1 and biases 0.

/// Appends a hidden layer as wide as the current last one and re-draws the
/// output layer's weights.
Mlp grow_layer(const Mlp& parent, Rng& rng);
/// Widens hidden layer `layer` by `count` units.
Mlp grow_nodes(const Mlp& parent, std::size_t layer, std::size_t count, Rng& rng);

/// add_layer applied identically to the actor and both critic heads.
std::pair<ActorNet, CriticNet> add_layer(const ActorNet& actor, const CriticNet& critic, Rng& rng);
/// add_nodes on the actor's hidden layer `layer`; each critic head uses the same
/// index clamped to its own depth. Throws std::invalid_argument if `layer` is
/// not a valid actor hidden layer or count is 0.
std::pair<ActorNet, CriticNet> add_nodes(const ActorNet& actor, const CriticNet& critic, std::size_t layer,
                                         std::size_t count, Rng& rng);

}  // namespace acn
