#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acn/params.hpp"
#include "acn/tensor.hpp"

namespace acn {

struct AdamConfig {
  double step_size = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected adaptive-moment state over one or more ParamSets, flattened
/// in the order they were registered.
struct MomentState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<Tensor> first;
  std::vector<Tensor> second;
};

MomentState make_moment_state(std::span<const ParamSet* const> params, const AdamConfig& config);
MomentState make_moment_state(const ParamSet& params, const AdamConfig& config);

/// One update. Throws NumericalError and leaves everything untouched if any
/// gradient is non-finite; throws std::invalid_argument on shape mismatch.
void moment_step(MomentState& state, std::span<ParamSet* const> params,
                 std::span<const GradSet* const> grads);
void moment_step(MomentState& state, ParamSet& params, const GradSet& grads);

/// Zeroes accumulators and the step counter; keeps hyperparameters.
void moment_reset(MomentState& state);

}  // namespace acn
