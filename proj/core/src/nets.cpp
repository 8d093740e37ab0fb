#include "acn/nets.hpp"

#include <algorithm>
#include <stdexcept>

namespace acn {

Mlp build_mlp(const TopologySpec& spec, Head head, Rng& rng) {
  return Mlp{spec, init_mlp_params(spec, rng), head};
}

Tensor ActorNet::act(const Tensor& states) const {
  Tensor out = net.forward(states);
  const std::size_t d = out.cols();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < d; ++c) row[c] *= action_bound[c];
  }
  return out;
}

std::vector<double> ActorNet::act(std::span<const double> state) const {
  Tensor in({1, state.size()}, std::vector<double>(state.begin(), state.end()));
  const Tensor out = act(in);
  return {out.data().begin(), out.data().end()};
}

Tensor concat_columns(const Tensor& left, const Tensor& right) {
  if (left.rows() != right.rows()) throw std::invalid_argument("concat_columns: row count mismatch");
  const std::size_t a = left.cols();
  const std::size_t b = right.cols();
  Tensor out = Tensor::matrix(left.rows(), a + b);
  for (std::size_t r = 0; r < left.rows(); ++r) {
    auto o = out.row(r);
    std::copy_n(left.row(r).begin(), a, o.begin());
    std::copy_n(right.row(r).begin(), b, o.begin() + static_cast<std::ptrdiff_t>(a));
  }
  return out;
}

Tensor CriticNet::q(std::size_t h, const Tensor& states, const Tensor& actions) const {
  return heads.at(h).forward(concat_columns(states, actions));
}

ActorNet build_actor(const HiddenWidths& hidden, std::size_t state_dim, std::size_t action_dim,
                     std::vector<double> action_bound, Rng& rng) {
  if (state_dim == 0 || action_dim == 0) throw std::invalid_argument("build_actor: dims must be >= 1");
  if (action_bound.size() != action_dim) throw std::invalid_argument("build_actor: one bound per action");
  for (double b : action_bound) {
    if (!(b > 0.0)) throw std::invalid_argument("build_actor: action bounds must be positive");
  }
  TopologySpec spec{state_dim, hidden, action_dim};
  return ActorNet{build_mlp(spec, Head::kTanh, rng), std::move(action_bound)};
}

CriticNet build_critic(const HiddenWidths& hidden, std::size_t state_dim, std::size_t action_dim, Rng& rng) {
  if (state_dim == 0 || action_dim == 0) throw std::invalid_argument("build_critic: dims must be >= 1");
  TopologySpec spec{state_dim + action_dim, hidden, 1};
  Rng r0(rng());
  Rng r1(rng());
  return CriticNet{{build_mlp(spec, Head::kIdentity, r0), build_mlp(spec, Head::kIdentity, r1)},
                   state_dim,
                   action_dim};
}

}  // namespace acn
