#include "acn/params.hpp"
#include "acn/tensor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "acn/errors.hpp"

namespace acn {
namespace {

TEST(Tensor, ShapeProductMustMatchData) {
  EXPECT_THROW(Tensor({2, 3}, std::vector<double>(5)), std::invalid_argument);
  EXPECT_NO_THROW(Tensor({2, 3}, std::vector<double>(6)));
}

TEST(Tensor, RowMajorIndexing) {
  const Tensor t = Tensor::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t(1, 0), 4.0);
  EXPECT_EQ(t[5], 6.0);
  EXPECT_EQ(t.row(1)[2], 6.0);
}

TEST(Tensor, RankOneReadsAsSingleRow) {
  const Tensor v = Tensor::vector(4, 2.0);
  EXPECT_EQ(v.rows(), 1u);
  EXPECT_EQ(v.cols(), 4u);
}

TEST(Tensor, RaggedRowsRejected) {
  EXPECT_THROW(Tensor::from_rows({{1, 2}, {3}}), std::invalid_argument);
}

TEST(Tensor, RequireFiniteThrowsNumericalError) {
  Tensor t = Tensor::vector(3);
  EXPECT_NO_THROW(t.require_finite("t"));
  t[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(t.all_finite());
  EXPECT_THROW(t.require_finite("t"), NumericalError);
  t[1] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(t.require_finite("t"), NumericalError);
}

TEST(ParamSet, NamesAreUnique) {
  ParamSet p;
  p.add("w", Tensor::vector(2));
  EXPECT_THROW(p.add("w", Tensor::vector(2)), std::invalid_argument);
  EXPECT_TRUE(p.contains("w"));
  EXPECT_FALSE(p.contains("b"));
  EXPECT_THROW(p.at("b"), std::out_of_range);
}

TEST(ParamSet, ScalarCount) {
  ParamSet p;
  p.add("w", Tensor::matrix(3, 4));
  p.add("b", Tensor::vector(4));
  EXPECT_EQ(p.scalar_count(), 16u);
}

TEST(GradSet, ZerosLikeIsCongruent) {
  ParamSet p;
  p.add("w", Tensor::matrix(3, 4, 1.0));
  p.add("b", Tensor::vector(4, 1.0));
  GradSet g = GradSet::zeros_like(p);
  EXPECT_TRUE(g.congruent_with(p));
  EXPECT_TRUE(g.all_zero());
  g[0][0] = 1.0;
  EXPECT_FALSE(g.all_zero());
  ParamSet q;
  q.add("w", Tensor::matrix(4, 3));
  q.add("b", Tensor::vector(4));
  EXPECT_FALSE(g.congruent_with(q));
}

}  // namespace
}  // namespace acn
