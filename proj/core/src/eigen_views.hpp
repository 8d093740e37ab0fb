#pragma once

#include <Eigen/Core>

#include "acn/tensor.hpp"

namespace acn::detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using MatrixView = Eigen::Map<RowMatrix>;
using ConstMatrixView = Eigen::Map<const RowMatrix>;
using VectorView = Eigen::Map<RowVector>;
using ConstVectorView = Eigen::Map<const RowVector>;

inline MatrixView mat(Tensor& t) {
  return MatrixView(t.raw(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
}
inline ConstMatrixView mat(const Tensor& t) {
  return ConstMatrixView(t.raw(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
}
inline VectorView vec(Tensor& t) { return VectorView(t.raw(), static_cast<Eigen::Index>(t.size())); }
inline ConstVectorView vec(const Tensor& t) {
  return ConstVectorView(t.raw(), static_cast<Eigen::Index>(t.size()));
}

}  // namespace acn::detail
