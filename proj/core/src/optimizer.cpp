#include "acn/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "acn/errors.hpp"

namespace acn {

MomentState make_moment_state(std::span<const ParamSet* const> params, const AdamConfig& config) {
  MomentState state;
  state.config = config;
  for (const ParamSet* p : params) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      state.first.emplace_back((*p)[i].shape());
      state.second.emplace_back((*p)[i].shape());
    }
  }
  return state;
}

MomentState make_moment_state(const ParamSet& params, const AdamConfig& config) {
  const ParamSet* list[] = {&params};
  return make_moment_state(list, config);
}

void moment_step(MomentState& state, std::span<ParamSet* const> params, std::span<const GradSet* const> grads) {
  if (params.size() != grads.size()) throw std::invalid_argument("moment_step: params/grads count mismatch");
  std::size_t slot = 0;
  for (std::size_t s = 0; s < params.size(); ++s) {
    if (!grads[s]->congruent_with(*params[s])) throw std::invalid_argument("moment_step: shape mismatch");
    for (std::size_t i = 0; i < params[s]->size(); ++i, ++slot) {
      if (slot >= state.first.size() || !state.first[slot].same_shape((*params[s])[i])) {
        throw std::invalid_argument("moment_step: state does not match params");
      }
    }
  }
  if (slot != state.first.size()) throw std::invalid_argument("moment_step: state does not match params");
  for (const GradSet* g : grads) {
    if (!g->all_finite()) throw NumericalError("moment_step: non-finite gradient");
  }

  const AdamConfig& c = state.config;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);

  slot = 0;
  for (std::size_t s = 0; s < params.size(); ++s) {
    ParamSet& ps = *params[s];
    const GradSet& gs = *grads[s];
    for (std::size_t i = 0; i < ps.size(); ++i, ++slot) {
      auto p = ps[i].data();
      auto g = gs[i].data();
      auto m = state.first[slot].data();
      auto v = state.second[slot].data();
      for (std::size_t k = 0; k < p.size(); ++k) {
        m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g[k];
        v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g[k] * g[k];
        const double m_hat = m[k] / correction1;
        const double v_hat = v[k] / correction2;
        p[k] -= c.step_size * m_hat / (std::sqrt(v_hat) + c.epsilon);
      }
    }
  }
}

void moment_step(MomentState& state, ParamSet& params, const GradSet& grads) {
  ParamSet* p[] = {&params};
  const GradSet* g[] = {&grads};
  moment_step(state, p, g);
}

void moment_reset(MomentState& state) {
  state.step = 0;
  for (auto& t : state.first) t.fill(0.0);
  for (auto& t : state.second) t.fill(0.0);
}

}  // namespace acn
