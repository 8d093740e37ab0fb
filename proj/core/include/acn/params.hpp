#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "acn/tensor.hpp"

namespace acn {

/// Ordered, uniquely named parameter tensors of one network.
class ParamSet {
 public:
  void add(std::string name, Tensor value);

  std::size_t size() const { return tensors_.size(); }
  Tensor& operator[](std::size_t i) { return tensors_[i]; }
  const Tensor& operator[](std::size_t i) const { return tensors_[i]; }
  const std::string& name(std::size_t i) const { return names_[i]; }

  Tensor& at(std::string_view name);
  const Tensor& at(std::string_view name) const;
  bool contains(std::string_view name) const;

  /// Total number of scalar parameters.
  std::size_t scalar_count() const;

  bool operator==(const ParamSet&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
};

/// Gradient tensors in the same order and shapes as a ParamSet.
class GradSet {
 public:
  GradSet() = default;
  static GradSet zeros_like(const ParamSet& params);

  std::size_t size() const { return tensors_.size(); }
  Tensor& operator[](std::size_t i) { return tensors_[i]; }
  const Tensor& operator[](std::size_t i) const { return tensors_[i]; }

  bool congruent_with(const ParamSet& params) const;
  bool all_finite() const;
  bool all_zero() const;

 private:
  std::vector<Tensor> tensors_;
};

}  // namespace acn
