#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "acn/params.hpp"
#include "acn/rng.hpp"
#include "acn/tensor.hpp"
#include "acn/topology.hpp"

namespace acn {

inline constexpr double kLayerNormEpsilon = 1e-5;

enum class Head : std::uint8_t { kTanh, kIdentity };

/// Entries i.i.d. Normal(0, 2 / fan_in).
Tensor he_init(std::size_t fan_in, std::vector<std::size_t> shape, Rng& rng);

/// Row-wise layer normalization with population variance.
Tensor layernorm_forward(const Tensor& x, const Tensor& gain, const Tensor& bias);

/// Parameter names used by MLP ParamSets.
std::string weight_name(std::size_t layer);
std::string bias_name(std::size_t layer);
std::string ln_gain_name(std::size_t layer);
std::string ln_bias_name(std::size_t layer);

/// He-initialized weights, zero biases, unit normalization gains.
ParamSet init_mlp_params(const TopologySpec& spec, Rng& rng);

/// Hidden layers: affine -> layernorm -> ReLU. Output: affine -> head.
Tensor mlp_forward(const ParamSet& params, const TopologySpec& spec, const Tensor& input, Head head);

/// Activations kept from a forward pass for the reverse sweep.
struct MlpTape {
  struct Hidden {
    Tensor normalized;  // (z - mean) / std, before gain and bias
    std::vector<double> inv_std;
    Tensor activation;  // ReLU output
  };
  const ParamSet* params = nullptr;
  const TopologySpec* spec = nullptr;
  Head head = Head::kIdentity;
  Tensor input;
  std::vector<Hidden> hidden;
  Tensor output;
};

/// Forward pass recording a tape. `params` and `spec` must outlive the tape.
MlpTape mlp_forward_tape(const ParamSet& params, const TopologySpec& spec, const Tensor& input,
                         Head head);

struct MlpGradients {
  GradSet params;
  Tensor input;  // empty unless requested
};

/// Reverse sweep: gradients of <upstream, output> w.r.t. every parameter and,
/// optionally, the input.
MlpGradients mlp_backward(const MlpTape& tape, const Tensor& upstream, bool want_input_grad = false);

MlpGradients mlp_backward(const ParamSet& params, const TopologySpec& spec, const Tensor& input,
                          Head head, const Tensor& upstream, bool want_input_grad = false);

}  // namespace acn
