#include <cmath>
#include <stdexcept>

#include "acn/autodiff.hpp"

namespace acn {

Tensor he_init(std::size_t fan_in, std::vector<std::size_t> shape, Rng& rng) {
  if (fan_in == 0) throw std::invalid_argument("he_init: fan_in must be >= 1");
  Tensor t(std::move(shape));
  const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
  for (double& v : t.data()) v = rng.normal(0.0, stddev);
  return t;
}

Tensor layernorm_forward(const Tensor& x, const Tensor& gain, const Tensor& bias) {
  const std::size_t d = x.cols();
  if (d < 2) throw std::invalid_argument("layernorm: feature dimension must be >= 2");
  if (gain.size() != d || bias.size() != d) {
    throw std::invalid_argument("layernorm: gain/bias length must equal feature dimension");
  }
  Tensor out(x.shape());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto in = x.row(r);
    auto o = out.row(r);
    double mean = 0.0;
    for (double v : in) mean += v;
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (double v : in) var += (v - mean) * (v - mean);
    var /= static_cast<double>(d);
    const double inv = 1.0 / std::sqrt(var + kLayerNormEpsilon);
    for (std::size_t c = 0; c < d; ++c) o[c] = gain[c] * (in[c] - mean) * inv + bias[c];
  }
  return out;
}

}  // namespace acn
