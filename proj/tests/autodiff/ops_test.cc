// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/autodiff/ops.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dereverb/common/error.h"
#include "gradcheck.h"

namespace dereverb::ad {
namespace {

using testing::GradCheck;
using testing::RandomTensor;

constexpr double kTol = 1e-5;

// Weighted sum so that every output element gets a distinct upstream grad.
Tensor Project(Tape* tape, const Tensor& y, const Tensor& probe) {
  return Sum(tape, Mul(tape, y, probe));
}

// Random values bounded away from zero so kinks are never straddled.
Tensor AwayFromZero(Shape shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.1, 1.5);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> v(NumElements(shape));
  for (double& x : v) x = sign(rng) ? mag(rng) : -mag(rng);
  return Tensor::FromData(std::move(shape), std::move(v), true);
}

TEST(LinearTest, IdentityWeights) {
  Tensor x = Tensor::FromData({2, 2}, {1.0, 2.0, -3.0, 4.0});
  Tensor w = Tensor::FromData({2, 2}, {1.0, 0.0, 0.0, 1.0});
  Tensor b = Tensor::Zeros({2});
  Tensor y = Linear(nullptr, x, w, b);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(y.values()[i], x.values()[i]);
}

TEST(LinearTest, HandArithmetic) {
  Tensor x = Tensor::FromData({1, 2}, {1.0, 1.0});
  Tensor w = Tensor::FromData({2, 2}, {1.0, 2.0, 3.0, 4.0});
  Tensor y = Linear(nullptr, x, w, Tensor::Zeros({2}));
  EXPECT_EQ(y.values()[0], 4.0);
  EXPECT_EQ(y.values()[1], 6.0);
}

TEST(LinearTest, ShapeMismatch) {
  Tensor x = Tensor::Zeros({2, 3});
  EXPECT_THROW(Linear(nullptr, x, Tensor::Zeros({2, 2}), Tensor::Zeros({2})),
               InvalidArgument);
  EXPECT_THROW(Linear(nullptr, x, Tensor::Zeros({3, 2}), Tensor::Zeros({3})),
               InvalidArgument);
}

TEST(LinearTest, SumGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  Tensor x = RandomTensor({5, 4}, rng);
  Tensor w = RandomTensor({4, 3}, rng);
  Tensor b = RandomTensor({3}, rng);
  const Tensor inputs[] = {x, w, b};
  auto report = GradCheck(
      [&](Tape* t) { return Sum(t, Linear(t, x, w, b)); }, inputs, 0, rng);
  EXPECT_LT(report.max_rel_error, kTol) << report.worst;
}

TEST(LinearTest, WeightedGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  Tensor x = RandomTensor({6, 5}, rng);
  Tensor w = RandomTensor({5, 7}, rng);
  Tensor b = RandomTensor({7}, rng);
  Tensor probe = RandomTensor({6, 7}, rng, 1.0, false);
  const Tensor inputs[] = {x, w, b};
  auto report = GradCheck(
      [&](Tape* t) { return Project(t, Linear(t, x, w, b), probe); }, inputs,
      0, rng);
  EXPECT_LT(report.max_rel_error, kTol) << report.worst;
}

TEST(PReluTest, SlopeOneIsIdentityAndZeroIsRelu) {
  Tensor x = Tensor::FromData({1, 3}, {-2.0, 0.0, 3.0});
  Tensor one = PRelu(nullptr, x, Tensor::FromData({3}, {1.0, 1.0, 1.0}));
  Tensor zero = PRelu(nullptr, x, Tensor::Zeros({3}));
  Tensor relu = Relu(nullptr, x);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(one.values()[i], x.values()[i]);
    EXPECT_EQ(zero.values()[i], relu.values()[i]);
  }
}

TEST(PReluTest, SlopeLengthMustMatch) {
  EXPECT_THROW(PRelu(nullptr, Tensor::Zeros({2, 3}), Tensor::Zeros({2})),
               InvalidArgument);
}

TEST(PReluTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  Tensor x = AwayFromZero({6, 4}, rng);
  Tensor slope = RandomTensor({4}, rng, 0.3);
  Tensor probe = RandomTensor({6, 4}, rng, 1.0, false);
  const Tensor inputs[] = {x, slope};
  auto report = GradCheck(
      [&](Tape* t) { return Project(t, PRelu(t, x, slope), probe); }, inputs, 0,
      rng);
  EXPECT_LT(report.max_rel_error, kTol) << report.worst;
}

TEST(ElementwiseTest, TanhOfZero) {
  Tensor y = Tanh(nullptr, Tensor::Zeros({1, 4}));
  for (double v : y.values()) EXPECT_EQ(v, 0.0);
}

TEST(ElementwiseTest, MeanOverOneChannelIsIdentity) {
  std::mt19937_64 rng(4);
  Tensor x = RandomTensor({3, 2}, rng);
  const Tensor xs[] = {x};
  Tensor m = MeanOverChannels(nullptr, xs);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(m.values()[i], x.values()[i]);
}

TEST(ElementwiseTest, ShapeMismatchIsRejected) {
  Tensor a = Tensor::Zeros({2, 3});
  Tensor b = Tensor::Zeros({3, 2});
  EXPECT_THROW(Add(nullptr, a, b), InvalidArgument);
  EXPECT_THROW(Mul(nullptr, a, b), InvalidArgument);
  const Tensor xs[] = {a, b};
  EXPECT_THROW(MeanOverChannels(nullptr, xs), InvalidArgument);
  EXPECT_THROW(ConcatFeatures(nullptr, xs), InvalidArgument);
  EXPECT_THROW(SliceFrames(nullptr, a, 1, 3), InvalidArgument);
  EXPECT_THROW(SliceFeatures(nullptr, a, 2, 2), InvalidArgument);
}

TEST(ElementwiseTest, ConcatAndSliceRoundTrip) {
  std::mt19937_64 rng(5);
  Tensor a = RandomTensor({3, 2}, rng);
  Tensor b = RandomTensor({3, 4}, rng);
  Tensor c = ConcatFeatures(nullptr, a, b);
  ASSERT_EQ(c.cols(), 6u);
  Tensor back = SliceFeatures(nullptr, c, 2, 6);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(back.values()[i], b.values()[i]);
  Tensor frames = SliceFrames(nullptr, c, 1, 3);
  EXPECT_EQ(frames.rows(), 2u);
  EXPECT_EQ(frames.values()[0], c.values()[6]);
}

struct UnaryCase {
  const char* name;
  Tensor (*op)(Tape*, const Tensor&);
};

TEST(ElementwiseTest, UnaryAdjointsMatchFiniteDifferences) {
  const UnaryCase cases[] = {{"tanh", Tanh}, {"relu", Relu}};
  for (const auto& c : cases) {
    std::mt19937_64 rng(6);
    Tensor x = AwayFromZero({4, 5}, rng);
    Tensor probe = RandomTensor({4, 5}, rng, 1.0, false);
    const Tensor inputs[] = {x};
    auto report = GradCheck(
        [&](Tape* t) { return Project(t, c.op(t, x), probe); }, inputs, 0, rng);
    EXPECT_LT(report.max_rel_error, kTol) << c.name << " " << report.worst;
  }
}

TEST(ElementwiseTest, BinaryAdjointsMatchFiniteDifferences) {
  std::mt19937_64 rng(7);
  Tensor a = RandomTensor({3, 4}, rng);
  Tensor b = RandomTensor({3, 4}, rng);
  Tensor probe = RandomTensor({3, 4}, rng, 1.0, false);
  const Tensor inputs[] = {a, b};
  auto add = GradCheck([&](Tape* t) { return Project(t, Add(t, a, b), probe); },
                       inputs, 0, rng);
  EXPECT_LT(add.max_rel_error, kTol) << add.worst;
  auto mul = GradCheck([&](Tape* t) { return Project(t, Mul(t, a, b), probe); },
                       inputs, 0, rng);
  EXPECT_LT(mul.max_rel_error, kTol) << mul.worst;
  auto scale = GradCheck(
      [&](Tape* t) { return Project(t, Scale(t, a, -1.7), probe); }, inputs, 0,
      rng);
  EXPECT_LT(scale.max_rel_error, kTol) << scale.worst;
}

TEST(ElementwiseTest, ChannelAndLayoutAdjointsMatchFiniteDifferences) {
  std::mt19937_64 rng(8);
  std::vector<Tensor> xs;
  for (int c = 0; c < 3; ++c) xs.push_back(RandomTensor({4, 3}, rng));
  Tensor mean_probe = RandomTensor({4, 3}, rng, 1.0, false);
  Tensor cat_probe = RandomTensor({4, 9}, rng, 1.0, false);
  Tensor slice_probe = RandomTensor({4, 2}, rng, 1.0, false);
  Tensor frame_probe = RandomTensor({2, 3}, rng, 1.0, false);

  auto mean = GradCheck(
      [&](Tape* t) { return Project(t, MeanOverChannels(t, xs), mean_probe); },
      xs, 0, rng);
  EXPECT_LT(mean.max_rel_error, kTol) << mean.worst;
  auto cat = GradCheck(
      [&](Tape* t) { return Project(t, ConcatFeatures(t, xs), cat_probe); }, xs,
      0, rng);
  EXPECT_LT(cat.max_rel_error, kTol) << cat.worst;
  const Tensor one[] = {xs[0]};
  auto slice = GradCheck(
      [&](Tape* t) {
        return Project(t, SliceFeatures(t, xs[0], 1, 3), slice_probe);
      },
      one, 0, rng);
  EXPECT_LT(slice.max_rel_error, kTol) << slice.worst;
  auto frames = GradCheck(
      [&](Tape* t) {
        return Project(t, SliceFrames(t, xs[0], 1, 3), frame_probe);
      },
      one, 0, rng);
  EXPECT_LT(frames.max_rel_error, kTol) << frames.worst;
}

TEST(CausalMemoryTest, SingleTapOfOnesIsIdentity) {
  std::mt19937_64 rng(9);
  Tensor p = RandomTensor({5, 3}, rng);
  Tensor w = Tensor::FromData({1, 3}, {1.0, 1.0, 1.0});
  Tensor y = CausalMemory(nullptr, p, w);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(y.values()[i], p.values()[i]);
}

TEST(CausalMemoryTest, MatchesDirectSum) {
  std::mt19937_64 rng(10);
  Tensor p = RandomTensor({7, 2}, rng);
  Tensor w = RandomTensor({4, 2}, rng);
  Tensor y = CausalMemory(nullptr, p, w);
  for (std::size_t t = 0; t < 7; ++t) {
    for (std::size_t f = 0; f < 2; ++f) {
      double expect = 0.0;
      for (int tau = 0; tau < 4; ++tau) {
        const int src = static_cast<int>(t) - tau;
        if (src >= 0) expect += w.values()[tau * 2 + f] * p.values()[src * 2 + f];
      }
      EXPECT_NEAR(y.values()[t * 2 + f], expect, 1e-14);
    }
  }
}

TEST(CausalMemoryTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  Tensor p = RandomTensor({8, 3}, rng);
  Tensor w = RandomTensor({4, 3}, rng);
  Tensor probe = RandomTensor({8, 3}, rng, 1.0, false);
  const Tensor inputs[] = {p, w};
  auto report = GradCheck(
      [&](Tape* t) { return Project(t, CausalMemory(t, p, w), probe); }, inputs,
      0, rng);
  EXPECT_LT(report.max_rel_error, kTol) << report.worst;
}

TEST(WeightedSquaredErrorTest, ValueAndGradient) {
  std::mt19937_64 rng(12);
  Tensor pred = RandomTensor({3, 4}, rng);
  Tensor target = RandomTensor({3, 4}, rng, 1.0, false);
  const std::vector<double> weights = {1.0, 0.0, 0.5};
  double expect = 0.0;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const double d = pred.values()[r * 4 + c] - target.values()[r * 4 + c];
      expect += weights[r] * d * d;
    }
  }
  EXPECT_NEAR(WeightedSquaredError(nullptr, pred, target, weights).item(),
              expect, 1e-12);
  const Tensor inputs[] = {pred};
  auto report = GradCheck(
      [&](Tape* t) { return WeightedSquaredError(t, pred, target, weights); },
      inputs, 0, rng);
  EXPECT_LT(report.max_rel_error, kTol) << report.worst;
}

// Random small graphs mixing every op; PReLU/ReLU inputs are kept off their
// kink by using tanh outputs shifted away from zero only when probes allow it.
Tensor RandomComposition(Tape* t, std::mt19937_64 graph_rng,
                         const std::vector<Tensor>& leaves) {
  std::uniform_int_distribution<int> pick_op(0, 6);
  Tensor h = leaves[0];
  const Tensor& w = leaves[1];
  const Tensor& b = leaves[2];
  const Tensor& mem = leaves[3];
  const Tensor& other = leaves[4];
  for (int step = 0; step < 6; ++step) {
    switch (pick_op(graph_rng)) {
      case 0:
        h = Linear(t, h, w, b);
        break;
      case 1:
        h = Tanh(t, h);
        break;
      case 2:
        h = Mul(t, h, other);
        break;
      case 3:
        h = CausalMemory(t, h, mem);
        break;
      case 4: {
        const Tensor xs[] = {h, other};
        h = MeanOverChannels(t, xs);
        break;
      }
      case 5:
        h = SliceFeatures(t, ConcatFeatures(t, other, h), 3, 6);
        break;
      default:
        h = Add(t, Scale(t, h, 0.5), other);
        break;
    }
  }
  return Sum(t, Mul(t, h, h));
}

TEST(CompositionTest, RandomGraphsMatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(100 + seed);
    std::vector<Tensor> leaves = {
        RandomTensor({5, 3}, rng, 0.8), RandomTensor({3, 3}, rng, 0.6),
        RandomTensor({3}, rng, 0.3), RandomTensor({3, 3}, rng, 0.5),
        RandomTensor({5, 3}, rng, 0.8)};
    std::mt19937_64 graph_rng(seed);
    auto report = GradCheck(
        [&](Tape* t) { return RandomComposition(t, graph_rng, leaves); }, leaves,
        0, rng);
    EXPECT_LT(report.max_rel_error, kTol)
        << "seed " << seed << " " << report.worst;
  }
}

TEST(CompositionTest, BackwardIsDeterministic) {
  std::mt19937_64 rng(13);
  std::vector<Tensor> leaves = {
      RandomTensor({5, 3}, rng), RandomTensor({3, 3}, rng),
      RandomTensor({3}, rng), RandomTensor({3, 3}, rng),
      RandomTensor({5, 3}, rng)};
  std::vector<std::vector<double>> first;
  for (int run = 0; run < 2; ++run) {
    for (auto& l : leaves) l.ZeroGrad();
    Tape tape;
    Tensor loss = RandomComposition(&tape, std::mt19937_64(3), leaves);
    tape.Backward(loss);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      std::vector<double> g(leaves[i].grad().begin(), leaves[i].grad().end());
      if (run == 0) {
        first.push_back(g);
      } else {
        EXPECT_EQ(g, first[i]);
      }
    }
  }
}

TEST(CompositionTest, OpsDoNotMutateInputs) {
  std::mt19937_64 rng(14);
  std::vector<Tensor> leaves = {
      RandomTensor({5, 3}, rng), RandomTensor({3, 3}, rng),
      RandomTensor({3}, rng), RandomTensor({3, 3}, rng),
      RandomTensor({5, 3}, rng)};
  std::vector<std::vector<double>> before;
  for (const auto& l : leaves) before.emplace_back(l.values().begin(), l.values().end());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Tape tape;
    Tensor loss = RandomComposition(&tape, std::mt19937_64(seed), leaves);
    tape.Backward(loss);
  }
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    EXPECT_EQ(std::vector<double>(leaves[i].values().begin(),
                                  leaves[i].values().end()),
              before[i]);
  }
}

}  // namespace
}  // namespace dereverb::ad
