// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/train/example.h"

#include <gtest/gtest.h>

#include "dereverb/common/error.h"
#include "dereverb/signal/mask.h"
#include "dereverb/train/loss.h"
#include "test_util.h"
#include "train_fixtures.h"

namespace dereverb::train {
namespace {

using testing::MakeUtterances;
using testing::MaxAbsDiff;

class ExampleTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    utts_ = new std::vector<Utterance>(MakeUtterances(1, 3, 0.5, 11));
  }
  static void TearDownTestSuite() { delete utts_; }
  static const Utterance& utt() { return (*utts_)[0]; }
  static std::vector<Utterance>* utts_;
};
std::vector<Utterance>* ExampleTest::utts_ = nullptr;

void ExpectMaskTarget(const TrainExample& ex, const Utterance& u,
                      const std::vector<AudioBuffer>& targets) {
  for (std::size_t c = 0; c < u.channels(); ++c) {
    ComplexMask expect =
        ClipMask(ComputeCrm(Stft(u.mixture[c]), Stft(targets[c])));
    ad::Tensor t = MaskToTensor(expect);
    EXPECT_EQ(MaxAbsDiff(ex.mask_target[c].values(), t.values()), 0.0);
    EXPECT_EQ(MaxAbsDiff(ex.signal_target[c].values(), targets[c].samples()),
              0.0);
  }
}

TEST_F(ExampleTest, RenderedTargetsDiffer) {
  ASSERT_EQ(utt().channels(), 3u);
  EXPECT_NO_THROW(utt().Validate());
  EXPECT_GT(MaxAbsDiff(utt().direct[0].samples(), utt().early[0].samples()), 0.0);
  EXPECT_GT(MaxAbsDiff(utt().early[0].samples(), utt().mixture[0].samples()), 0.0);
}

TEST_F(ExampleTest, ControllerZeroUsesDirectPath) {
  TrainExample ex = BuildExample(utt(), 0.0);
  EXPECT_EQ(ex.controller, 0.0);
  ExpectMaskTarget(ex, utt(), utt().direct);
  for (const auto& f : ex.features) {
    for (std::size_t t = 0; t < f.rows(); ++t) EXPECT_EQ(f.values()[t * f.cols() + 80], 0.0);
  }
}

TEST_F(ExampleTest, ControllerOneUsesEarlyReflections) {
  TrainExample ex = BuildExample(utt(), 1.0);
  ExpectMaskTarget(ex, utt(), utt().early);
  for (const auto& f : ex.features) {
    EXPECT_EQ(f.cols(), 81u);
    EXPECT_EQ(f.values()[80], 1.0);
  }
}

TEST_F(ExampleTest, MaskTargetsAreClipped) {
  TrainExample ex = BuildExample(utt(), 0.0);
  for (const auto& m : ex.mask_target) {
    for (double v : m.values()) {
      EXPECT_LE(v, 1.0);
      EXPECT_GE(v, -1.0);
    }
  }
}

TEST_F(ExampleTest, RejectsFractionalControllerAndMissingTargets) {
  EXPECT_THROW(BuildExample(utt(), 0.5), InvalidArgument);
  Utterance broken = utt();
  broken.early.clear();
  EXPECT_THROW(BuildExample(broken, 1.0), DataError);
  broken = utt();
  broken.direct[1] = AudioBuffer::Zeros(10);
  EXPECT_THROW(BuildExample(broken, 0.0), DataError);
}

TEST_F(ExampleTest, CropKeepsSignalsAligned) {
  std::mt19937_64 rng(12);
  Utterance crop = CropUtterance(utt(), 1000, rng);
  ASSERT_EQ(crop.length(), 1000u);
  // Locate the offset from the mixture and check the targets use the same one.
  const auto full = utt().mixture[0].samples();
  std::size_t offset = 0;
  for (; offset + 1000 <= full.size(); ++offset) {
    if (std::equal(crop.mixture[0].samples().begin(),
                   crop.mixture[0].samples().end(), full.begin() + offset)) {
      break;
    }
  }
  ASSERT_LE(offset + 1000, full.size());
  for (std::size_t c = 0; c < crop.channels(); ++c) {
    EXPECT_EQ(crop.direct[c][0], utt().direct[c][offset]);
    EXPECT_EQ(crop.early[c][999], utt().early[c][offset + 999]);
  }
  Utterance whole = CropUtterance(utt(), utt().length() + 5, rng);
  EXPECT_EQ(whole.length(), utt().length());
}

TEST(ControllerTest, RandomDrawsAreBalanced) {
  std::mt19937_64 rng(13);
  int ones = 0;
  const int draws = 2000;
  for (int i = 0; i < draws; ++i) {
    auto f = DrawControllers(ControllerMode::kRandom, rng);
    ASSERT_EQ(f.size(), 1u);
    ASSERT_TRUE(f[0] == 0.0 || f[0] == 1.0);
    ones += f[0] == 1.0;
  }
  const double ratio = static_cast<double>(ones) / draws;
  EXPECT_GE(ratio, 0.45);
  EXPECT_LE(ratio, 0.55);
}

TEST(ControllerTest, FixedModes) {
  std::mt19937_64 rng(14);
  EXPECT_EQ(DrawControllers(ControllerMode::kDirect, rng), std::vector<double>{0.0});
  EXPECT_EQ(DrawControllers(ControllerMode::kEarly, rng), std::vector<double>{1.0});
  EXPECT_EQ(DrawControllers(ControllerMode::kBoth, rng),
            (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(ParseControllerMode(ControllerModeName(ControllerMode::kBoth)),
            ControllerMode::kBoth);
  EXPECT_THROW(ParseControllerMode("sometimes"), InvalidArgument);
}

}  // namespace
}  // namespace dereverb::train
