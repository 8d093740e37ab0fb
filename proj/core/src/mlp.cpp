#include <cmath>
#include <stdexcept>
#include <string>

#include "acn/autodiff.hpp"
#include "acn/errors.hpp"
#include "eigen_views.hpp"

namespace acn {

using detail::mat;
using detail::vec;

std::string weight_name(std::size_t layer) { return "l" + std::to_string(layer) + ".weight"; }
std::string bias_name(std::size_t layer) { return "l" + std::to_string(layer) + ".bias"; }
std::string ln_gain_name(std::size_t layer) { return "l" + std::to_string(layer) + ".ln_gain"; }
std::string ln_bias_name(std::size_t layer) { return "l" + std::to_string(layer) + ".ln_bias"; }

ParamSet init_mlp_params(const TopologySpec& spec, Rng& rng) {
  spec.validate();
  ParamSet params;
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const std::size_t in = spec.fan_in(l);
    const std::size_t out = spec.fan_out(l);
    params.add(weight_name(l), he_init(in, {in, out}, rng));
    params.add(bias_name(l), Tensor::vector(out));
    if (l < spec.hidden.size()) {
      params.add(ln_gain_name(l), Tensor::vector(out, 1.0));
      params.add(ln_bias_name(l), Tensor::vector(out));
    }
  }
  return params;
}

namespace {

// Parameters are stored per layer as weight, bias[, ln_gain, ln_bias].
std::size_t weight_index(const TopologySpec& spec, std::size_t layer) {
  return layer < spec.hidden.size() ? 4 * layer : 4 * spec.hidden.size();
}

void check_layout(const ParamSet& params, const TopologySpec& spec) {
  const std::size_t expected = 4 * spec.hidden.size() + 2;
  if (params.size() != expected) {
    throw std::invalid_argument("mlp: ParamSet has " + std::to_string(params.size()) +
                                " tensors, topology needs " + std::to_string(expected));
  }
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const std::size_t w = weight_index(spec, l);
    const Tensor& weight = params[w];
    if (weight.rank() != 2 || weight.rows() != spec.fan_in(l) || weight.cols() != spec.fan_out(l) ||
        params[w + 1].size() != spec.fan_out(l)) {
      throw std::invalid_argument("mlp: parameter shapes do not match topology at layer " +
                                  std::to_string(l));
    }
    if (l < spec.hidden.size() &&
        (params[w + 2].size() != spec.fan_out(l) || params[w + 3].size() != spec.fan_out(l))) {
      throw std::invalid_argument("mlp: normalization shapes do not match topology at layer " +
                                  std::to_string(l));
    }
    if (l < spec.hidden.size() && spec.hidden[l] < 2) {
      throw std::invalid_argument("mlp: layernorm requires hidden width >= 2");
    }
  }
}

void check_input(const TopologySpec& spec, const Tensor& input) {
  if (input.rank() != 2 || input.cols() != spec.input_width) {
    throw std::invalid_argument("mlp: input must be a batch with " + std::to_string(spec.input_width) +
                                " features");
  }
}

Tensor affine(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  Tensor z = Tensor::matrix(x.rows(), weight.cols());
  mat(z).noalias() = mat(x) * mat(weight);
  mat(z).rowwise() += vec(bias);
  return z;
}

}  // namespace

MlpTape mlp_forward_tape(const ParamSet& params, const TopologySpec& spec, const Tensor& input, Head head) {
  check_layout(params, spec);
  check_input(spec, input);

  MlpTape tape;
  tape.params = &params;
  tape.spec = &spec;
  tape.head = head;
  tape.input = input;
  tape.hidden.resize(spec.hidden.size());

  const Tensor* x = &tape.input;
  for (std::size_t l = 0; l < spec.hidden.size(); ++l) {
    const std::size_t w = weight_index(spec, l);
    const Tensor& gain = params[w + 2];
    const Tensor& beta = params[w + 3];
    auto& layer = tape.hidden[l];

    Tensor z = affine(*x, params[w], params[w + 1]);
    const std::size_t rows = z.rows();
    const std::size_t d = z.cols();
    layer.inv_std.resize(rows);
    layer.activation = Tensor::matrix(rows, d);
    for (std::size_t r = 0; r < rows; ++r) {
      auto zr = z.row(r);
      double mean = 0.0;
      for (double v : zr) mean += v;
      mean /= static_cast<double>(d);
      double var = 0.0;
      for (double v : zr) var += (v - mean) * (v - mean);
      var /= static_cast<double>(d);
      const double inv = 1.0 / std::sqrt(var + kLayerNormEpsilon);
      layer.inv_std[r] = inv;
      auto act = layer.activation.row(r);
      for (std::size_t c = 0; c < d; ++c) {
        zr[c] = (zr[c] - mean) * inv;
        const double n = gain[c] * zr[c] + beta[c];
        act[c] = n > 0.0 ? n : 0.0;
      }
    }
    layer.normalized = std::move(z);
    x = &layer.activation;
  }

  const std::size_t w = weight_index(spec, spec.hidden.size());
  tape.output = affine(*x, params[w], params[w + 1]);
  if (head == Head::kTanh) {
    for (double& v : tape.output.data()) v = std::tanh(v);
  }
  tape.output.require_finite("mlp output");
  return tape;
}

Tensor mlp_forward(const ParamSet& params, const TopologySpec& spec, const Tensor& input, Head head) {
  return mlp_forward_tape(params, spec, input, head).output;
}

MlpGradients mlp_backward(const MlpTape& tape, const Tensor& upstream, bool want_input_grad) {
  const ParamSet& params = *tape.params;
  const TopologySpec& spec = *tape.spec;
  if (!upstream.same_shape(tape.output)) {
    throw std::invalid_argument("mlp_backward: upstream shape must equal output shape");
  }

  MlpGradients result;
  result.params = GradSet::zeros_like(params);
  GradSet& grads = result.params;

  Tensor delta = upstream;
  if (tape.head == Head::kTanh) {
    auto d = delta.data();
    auto y = tape.output.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= 1.0 - y[i] * y[i];
  }

  const std::size_t hidden_count = spec.hidden.size();
  for (std::size_t l = hidden_count + 1; l-- > 0;) {
    const std::size_t w = weight_index(spec, l);
    const Tensor& layer_input = l == 0 ? tape.input : tape.hidden[l - 1].activation;

    if (l < hidden_count) {
      // delta holds dL/d(activation); push it back through ReLU and layernorm.
      const auto& layer = tape.hidden[l];
      const Tensor& gain = params[w + 2];
      Tensor& dgain = grads[w + 2];
      Tensor& dbeta = grads[w + 3];
      const std::size_t d = delta.cols();
      std::vector<double> dxhat(d);
      for (std::size_t r = 0; r < delta.rows(); ++r) {
        auto dr = delta.row(r);
        const auto act = layer.activation.row(r);
        const auto xhat = layer.normalized.row(r);
        double mean_dxhat = 0.0;
        double mean_dxhat_xhat = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          const double dn = act[c] > 0.0 ? dr[c] : 0.0;
          dgain[c] += dn * xhat[c];
          dbeta[c] += dn;
          dxhat[c] = dn * gain[c];
          mean_dxhat += dxhat[c];
          mean_dxhat_xhat += dxhat[c] * xhat[c];
        }
        mean_dxhat /= static_cast<double>(d);
        mean_dxhat_xhat /= static_cast<double>(d);
        const double inv = layer.inv_std[r];
        for (std::size_t c = 0; c < d; ++c) {
          dr[c] = inv * (dxhat[c] - mean_dxhat - xhat[c] * mean_dxhat_xhat);
        }
      }
    }

    mat(grads[w]).noalias() = mat(layer_input).transpose() * mat(delta);
    vec(grads[w + 1]) = mat(delta).colwise().sum();

    if (l > 0 || want_input_grad) {
      Tensor next = Tensor::matrix(delta.rows(), params[w].rows());
      mat(next).noalias() = mat(delta) * mat(params[w]).transpose();
      delta = std::move(next);
    }
  }
  if (want_input_grad) result.input = std::move(delta);
  return result;
}

MlpGradients mlp_backward(const ParamSet& params, const TopologySpec& spec, const Tensor& input, Head head,
                          const Tensor& upstream, bool want_input_grad) {
  const MlpTape tape = mlp_forward_tape(params, spec, input, head);
  return mlp_backward(tape, upstream, want_input_grad);
}

}  // namespace acn
