#include "acn/nets.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace acn {
namespace {

const std::vector<double> kBound{2.0};

struct Pair {
  ActorNet actor;
  CriticNet critic;
};

Pair fresh(const HiddenWidths& hidden, std::uint64_t seed) {
  Rng rng(seed);
  Rng ra = rng.split(1), rc = rng.split(2);
  return {build_actor(hidden, 3, 1, kBound, ra), build_critic(hidden, 3, 1, rc)};
}

// ---- build ------------------------------------------------------------------

TEST(BuildActor, ShapesAndInitialization) {
  const ActorNet a = fresh({64}, 1).actor;
  EXPECT_EQ(a.net.params.at(weight_name(0)).shape(), (std::vector<std::size_t>{3, 64}));
  EXPECT_EQ(a.net.params.at(weight_name(1)).shape(), (std::vector<std::size_t>{64, 1}));
  for (double v : a.net.params.at(bias_name(1)).data()) EXPECT_EQ(v, 0.0);
  for (double v : a.net.params.at(ln_gain_name(0)).data()) EXPECT_EQ(v, 1.0);
  for (double v : a.net.params.at(ln_bias_name(0)).data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(a.net.head, Head::kTanh);
}

TEST(BuildActor, OutputsWithinBound) {
  const ActorNet a = fresh({16, 16}, 2).actor;
  Rng rng(3);
  const Tensor s = test::random_matrix(200, 3, rng, 50.0);
  const Tensor acts = a.act(s);
  for (double v : acts.data()) {
    EXPECT_LE(std::abs(v), 2.0);
  }
}

TEST(BuildActor, SameSeedSameParameters) { EXPECT_EQ(fresh({64}, 4).actor, fresh({64}, 4).actor); }

TEST(BuildActor, RejectsBadDims) {
  Rng rng(5);
  EXPECT_THROW(build_actor({64}, 0, 1, kBound, rng), std::invalid_argument);
  EXPECT_THROW(build_actor({64}, 3, 1, {0.0}, rng), std::invalid_argument);
  EXPECT_THROW(build_actor({64}, 3, 2, kBound, rng), std::invalid_argument);
}

TEST(BuildCritic, TwinHeadsIndependentScalarOutputs) {
  const CriticNet c = fresh({64}, 6).critic;
  for (const Mlp& h : c.heads) {
    EXPECT_EQ(h.spec.input_width, 4u);
    EXPECT_EQ(h.spec.output_width, 1u);
    EXPECT_EQ(h.head, Head::kIdentity);
  }
  EXPECT_NE(c.heads[0].params, c.heads[1].params);
  Rng rng(7);
  const Tensor q = c.q(1, test::random_matrix(5, 3, rng), test::random_matrix(5, 1, rng));
  EXPECT_EQ(q.rows(), 5u);
  EXPECT_EQ(q.cols(), 1u);
}

// ---- clone ------------------------------------------------------------------

TEST(Clone, DeepAndIndependent) {
  const Pair p = fresh({8}, 8);
  ActorNet child = p.actor;
  Rng rng(9);
  const Tensor s = test::random_matrix(4, 3, rng);
  EXPECT_EQ(child.act(s), p.actor.act(s));
  child.net.params[0][0] += 1.0;
  EXPECT_NE(child.net.params, p.actor.net.params);
  const ActorNet clone2 = ActorNet(child);
  EXPECT_EQ(ActorNet(clone2), clone2);
}

// ---- add_layer --------------------------------------------------------------

TEST(AddLayer, AppendsLayerOfLastWidthEverywhere) {
  const Pair p = fresh({64}, 10);
  Rng rng(11);
  const auto [a, c] = add_layer(p.actor, p.critic, rng);
  EXPECT_EQ(a.spec().hidden, (HiddenWidths{64, 64}));
  EXPECT_EQ(c.heads[0].spec.hidden, (HiddenWidths{64, 64}));
  EXPECT_EQ(c.heads[1].spec.hidden, (HiddenWidths{64, 64}));

  const Pair q = fresh({80, 80}, 12);
  EXPECT_EQ(add_layer(q.actor, q.critic, rng).first.spec().hidden, (HiddenWidths{80, 80, 80}));
}

TEST(AddLayer, EarlierLayersCopiedVerbatimNewLayerInitialized) {
  const Pair p = fresh({16, 8}, 13);
  Rng rng(14);
  const auto [a, c] = add_layer(p.actor, p.critic, rng);
  for (std::size_t l = 0; l < 2; ++l) {
    for (const auto& name : {weight_name(l), bias_name(l), ln_gain_name(l), ln_bias_name(l)}) {
      EXPECT_EQ(a.net.params.at(name), p.actor.net.params.at(name)) << name;
      EXPECT_EQ(c.heads[1].params.at(name), p.critic.heads[1].params.at(name)) << name;
    }
  }
  EXPECT_EQ(a.net.params.at(weight_name(2)).shape(), (std::vector<std::size_t>{8, 8}));
  for (double v : a.net.params.at(ln_gain_name(2)).data()) EXPECT_EQ(v, 1.0);
  for (double v : a.net.params.at(bias_name(2)).data()) EXPECT_EQ(v, 0.0);
  // Output layer keeps its shape but is re-drawn.
  EXPECT_EQ(a.net.params.at(weight_name(3)).shape(), (std::vector<std::size_t>{8, 1}));
  EXPECT_NE(a.net.params.at(weight_name(3)), p.actor.net.params.at(weight_name(2)));
}

// ---- add_nodes --------------------------------------------------------------

TEST(AddNodes, WidensChosenLayer) {
  const Pair p = fresh({64}, 15);
  Rng rng(16);
  const auto [a, c] = add_nodes(p.actor, p.critic, 0, 8, rng);
  EXPECT_EQ(a.spec().hidden, (HiddenWidths{72}));
  EXPECT_EQ(c.spec().hidden, (HiddenWidths{72}));
  Rng srng(17);
  const Tensor s = test::random_matrix(10, 3, srng);
  EXPECT_GT(test::max_abs_diff(a.act(s), p.actor.act(s)), 0.0);
}

TEST(AddNodes, SurvivingBlocksExact) {
  const Pair p = fresh({6, 5}, 18);
  Rng rng(19);
  const auto [a, c] = add_nodes(p.actor, p.critic, 0, 4, rng);
  const auto check = [](const ParamSet& child, const ParamSet& parent) {
    for (std::size_t i = 0; i < parent.size(); ++i) {
      const Tensor& pt = parent[i];
      const Tensor& ct = child.at(parent.name(i));
      if (pt.rank() == 1) {
        for (std::size_t j = 0; j < pt.size(); ++j) EXPECT_EQ(ct[j], pt[j]) << parent.name(i);
      } else {
        for (std::size_t r = 0; r < pt.rows(); ++r) {
          for (std::size_t col = 0; col < pt.cols(); ++col) EXPECT_EQ(ct(r, col), pt(r, col)) << parent.name(i);
        }
      }
    }
  };
  check(a.net.params, p.actor.net.params);
  check(c.heads[0].params, p.critic.heads[0].params);
  check(c.heads[1].params, p.critic.heads[1].params);
  // Extended normalization vectors.
  const Tensor& g = a.net.params.at(ln_gain_name(0));
  const Tensor& b = a.net.params.at(ln_bias_name(0));
  for (std::size_t j = 6; j < 10; ++j) {
    EXPECT_EQ(g[j], 1.0);
    EXPECT_EQ(b[j], 0.0);
    EXPECT_EQ(a.net.params.at(bias_name(0))[j], 0.0);
  }
  // Outgoing weights from the new units are drawn, not zero.
  const Tensor& w1 = a.net.params.at(weight_name(1));
  EXPECT_EQ(w1.rows(), 10u);
  double mag = 0.0;
  for (std::size_t r = 6; r < 10; ++r) {
    for (std::size_t col = 0; col < w1.cols(); ++col) mag += std::abs(w1(r, col));
  }
  EXPECT_GT(mag, 0.0);
}

TEST(AddNodes, CriticIndexClampedToItsDepth) {
  Pair p = fresh({8, 8}, 20);
  Rng crng(21);
  p.critic = build_critic({8}, 3, 1, crng);
  Rng rng(22);
  const auto [a, c] = add_nodes(p.actor, p.critic, 1, 4, rng);
  EXPECT_EQ(a.spec().hidden, (HiddenWidths{8, 12}));
  EXPECT_EQ(c.spec().hidden, (HiddenWidths{12}));
}

TEST(AddNodes, InvalidArgumentsRejected) {
  const Pair p = fresh({8}, 23);
  Rng rng(24);
  EXPECT_THROW(add_nodes(p.actor, p.critic, 1, 4, rng), std::invalid_argument);
  EXPECT_THROW(add_nodes(p.actor, p.critic, 0, 0, rng), std::invalid_argument);
}

// ---- properties -------------------------------------------------------------

TEST(GrowthProperties, RandomSequencesStayLegalCoGrownAndMonotone) {
  Rng rng(25);
  const std::vector<std::size_t> counts{4, 8, 16, 32};
  for (int trial = 0; trial < 20; ++trial) {
    Pair p = fresh({4 + rng.uniform_index(8)}, 100 + trial);
    for (int step = 0; step < 6; ++step) {
      const std::size_t before_a = p.actor.parameter_count();
      const std::size_t before_c = p.critic.parameter_count();
      std::pair<ActorNet, CriticNet> next;
      if (rng.bernoulli(0.3)) {
        next = add_layer(p.actor, p.critic, rng);
      } else {
        const std::size_t layer = rng.uniform_index(p.actor.spec().hidden.size());
        next = add_nodes(p.actor, p.critic, layer, counts[rng.uniform_index(4)], rng);
      }
      p = {std::move(next.first), std::move(next.second)};
      EXPECT_NO_THROW(p.actor.spec().validate());
      EXPECT_EQ(p.actor.spec().hidden, p.critic.heads[0].spec.hidden);
      EXPECT_EQ(p.critic.heads[0].spec, p.critic.heads[1].spec);
      EXPECT_GT(p.actor.parameter_count(), before_a);
      EXPECT_GT(p.critic.parameter_count(), before_c);
      const Tensor s = test::random_matrix(3, 3, rng);
      EXPECT_NO_THROW(p.actor.act(s));
      EXPECT_NO_THROW(p.critic.q(0, s, test::random_matrix(3, 1, rng)));
    }
  }
}

}  // namespace
}  // namespace acn
