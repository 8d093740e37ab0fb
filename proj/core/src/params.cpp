#include "acn/params.hpp"

#include <algorithm>
#include <stdexcept>

namespace acn {

void ParamSet::add(std::string name, Tensor value) {
  if (contains(name)) throw std::invalid_argument("ParamSet: duplicate name " + name);
  names_.push_back(std::move(name));
  tensors_.push_back(std::move(value));
}

Tensor& ParamSet::at(std::string_view name) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return tensors_[i];
  }
  throw std::out_of_range("ParamSet: no parameter " + std::string(name));
}

const Tensor& ParamSet::at(std::string_view name) const {
  return const_cast<ParamSet*>(this)->at(name);
}

bool ParamSet::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

GradSet GradSet::zeros_like(const ParamSet& params) {
  GradSet g;
  g.tensors_.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) g.tensors_.emplace_back(params[i].shape());
  return g;
}

bool GradSet::congruent_with(const ParamSet& params) const {
  if (params.size() != tensors_.size()) return false;
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    if (!tensors_[i].same_shape(params[i])) return false;
  }
  return true;
}

bool GradSet::all_finite() const {
  return std::all_of(tensors_.begin(), tensors_.end(), [](const Tensor& t) { return t.all_finite(); });
}

bool GradSet::all_zero() const {
  return std::all_of(tensors_.begin(), tensors_.end(), [](const Tensor& t) {
    return std::all_of(t.data().begin(), t.data().end(), [](double v) { return v == 0.0; });
  });
}

}  // namespace acn
