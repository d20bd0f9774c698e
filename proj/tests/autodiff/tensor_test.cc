// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/autodiff/tensor.h"

#include <gtest/gtest.h>

#include "dereverb/autodiff/ops.h"
#include "dereverb/common/error.h"

namespace dereverb::ad {
namespace {

TEST(TensorTest, FromDataChecksShape) {
  EXPECT_THROW(Tensor::FromData({2, 3}, std::vector<double>(5)),
               InvalidArgument);
  Tensor t = Tensor::FromData({2, 3}, std::vector<double>(6, 1.5));
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_FALSE(t.has_grad());
}

TEST(TensorTest, CloneIsIndependent) {
  Tensor t = Tensor::FromData({2}, {1.0, 2.0});
  Tensor c = t.Clone();
  c.mutable_values()[0] = 7.0;
  EXPECT_EQ(t.values()[0], 1.0);
  EXPECT_FALSE(c.SameStorage(t));
}

TEST(TapeTest, SumGivesAllOnes) {
  Tensor x = Tensor::FromData({2, 2}, {1.0, -2.0, 3.0, 0.5}, true);
  Tape tape;
  Tensor loss = Sum(&tape, x);
  tape.Backward(loss);
  for (double g : x.grad()) EXPECT_EQ(g, 1.0);
}

TEST(TapeTest, SumOfSquaresGivesTwoX) {
  Tensor x = Tensor::FromData({1, 3}, {1.0, -2.0, 0.25}, true);
  Tape tape;
  Tensor loss = Sum(&tape, Mul(&tape, x, x));
  tape.Backward(loss);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(x.grad()[i], 2.0 * x.values()[i]);
}

TEST(TapeTest, NonScalarLossIsRejected) {
  Tensor x = Tensor::FromData({1, 3}, {1.0, 2.0, 3.0}, true);
  Tape tape;
  Tensor y = Scale(&tape, x, 2.0);
  EXPECT_THROW(tape.Backward(y), InvalidArgument);
}

TEST(TapeTest, DisconnectedLossIsRejected) {
  Tensor x = Tensor::FromData({1, 2}, {1.0, 2.0}, false);
  Tape tape;
  Tensor loss = Sum(&tape, x);
  EXPECT_EQ(tape.size(), 0u);
  EXPECT_THROW(tape.Backward(loss), InvalidArgument);
}

TEST(TapeTest, InferenceRecordsNothing) {
  Tensor x = Tensor::FromData({1, 2}, {1.0, 2.0}, true);
  Tensor loss = Sum(nullptr, Tanh(nullptr, x));
  EXPECT_FALSE(loss.requires_grad());
}

TEST(TapeTest, ReusedInputAccumulates) {
  Tensor x = Tensor::FromData({1, 2}, {1.0, 2.0}, true);
  Tape tape;
  Tensor loss = Sum(&tape, Add(&tape, x, Add(&tape, x, x)));
  tape.Backward(loss);
  EXPECT_EQ(x.grad()[0], 3.0);
  EXPECT_EQ(x.grad()[1], 3.0);
}

TEST(ParameterListTest, CountAndZero) {
  ParameterList params = {{"a", Tensor::Zeros({2, 3}, true)},
                          {"b", Tensor::Zeros({4}, true)}};
  EXPECT_EQ(CountElements(params), 10u);
  params[0].tensor.mutable_grad()[1] = 5.0;
  ZeroGrads(params);
  EXPECT_EQ(params[0].tensor.grad()[1], 0.0);
}

}  // namespace
}  // namespace dereverb::ad
