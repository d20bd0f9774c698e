// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/train/trainer.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "dereverb/common/error.h"
#include "dereverb/model/checkpoint.h"
#include "test_util.h"
#include "train_fixtures.h"

namespace dereverb::train {
namespace {

using testing::MakeUtterances;
using testing::SmallTrainConfig;
using testing::TempDir;

class TrainerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    utts_ = new std::vector<Utterance>(MakeUtterances(3, 2, 0.6, 21));
  }
  static void TearDownTestSuite() { delete utts_; }
  static const std::vector<Utterance>& utts() { return *utts_; }
  static std::vector<Utterance>* utts_;
};
std::vector<Utterance>* TrainerTest::utts_ = nullptr;

std::vector<double> AllParameters(const model::MimoTacModel& m) {
  std::vector<double> out;
  for (const auto& p : m.Parameters()) {
    out.insert(out.end(), p.tensor.values().begin(), p.tensor.values().end());
  }
  return out;
}

TEST_F(TrainerTest, ZeroLearningRateKeepsLossConstant) {
  TrainConfig c = SmallTrainConfig();
  c.adam.lr = 0.0;
  c.batch_size = 3;
  c.controller = ControllerMode::kBoth;
  Trainer t(c, utts());
  const auto before = AllParameters(t.model());
  t.Run();
  ASSERT_EQ(t.history().size(), 4u);
  for (const auto& r : t.history()) EXPECT_EQ(r.loss, t.history()[0].loss);
  EXPECT_EQ(AllParameters(t.model()), before);
}

TEST_F(TrainerTest, OneSmallStepReducesLoss) {
  for (std::uint64_t seed : {1, 2, 3}) {
    TrainConfig c = SmallTrainConfig();
    c.seed = seed;
    c.adam.lr = 1e-4;
    c.batch_size = 3;
    c.controller = ControllerMode::kDirect;
    Trainer t(c, utts());
    const double first = t.Step().loss;
    const double second = t.Step().loss;
    EXPECT_LT(second, first) << "seed " << seed;
  }
}

TEST_F(TrainerTest, SameSeedSameRun) {
  TrainConfig c = SmallTrainConfig();
  c.crop_seconds = 0.3;
  Trainer a(c, utts());
  Trainer b(c, utts());
  a.Run();
  b.Run();
  EXPECT_EQ(AllParameters(a.model()), AllParameters(b.model()));
  for (std::size_t i = 0; i < a.history().size(); ++i) {
    EXPECT_EQ(a.history()[i].loss, b.history()[i].loss);
  }
}

TEST_F(TrainerTest, ResumeMatchesUninterruptedRun) {
  TempDir dir;
  TrainConfig c = SmallTrainConfig();
  c.crop_seconds = 0.3;  // random crops exercise the sampler state
  c.steps = 6;
  c.checkpoint_every = 3;
  Trainer straight(c, utts());
  straight.Run(dir.path());
  ASSERT_TRUE(std::filesystem::exists(dir.path() / "step-3.ckpt"));
  ASSERT_TRUE(std::filesystem::exists(dir.path() / "step-6.ckpt"));

  Trainer resumed = Trainer::Resume(dir.path() / "step-3.ckpt", c, utts());
  EXPECT_EQ(resumed.step(), 3);
  resumed.Run();
  EXPECT_EQ(AllParameters(resumed.model()), AllParameters(straight.model()));
  ASSERT_EQ(resumed.history().size(), straight.history().size());
  for (std::size_t i = 0; i < straight.history().size(); ++i) {
    EXPECT_EQ(resumed.history()[i].loss, straight.history()[i].loss);
    EXPECT_EQ(resumed.history()[i].grad_norm, straight.history()[i].grad_norm);
  }
}

TEST_F(TrainerTest, ResumeRejectsDifferentModel) {
  TempDir dir;
  TrainConfig c = SmallTrainConfig();
  Trainer t(c, utts());
  t.Step();
  t.SaveCheckpoint(dir.path() / "a.ckpt");
  c.model.hidden = 9;
  EXPECT_THROW(Trainer::Resume(dir.path() / "a.ckpt", c, utts()),
               InvalidArgument);
  model::SaveModel(t.model(), dir.path() / "plain.ckpt");
  EXPECT_THROW(Trainer::Resume(dir.path() / "plain.ckpt", SmallTrainConfig(),
                               utts()),
               DataError);
}

TEST_F(TrainerTest, NanParameterAbortsWithDiagnostic) {
  TrainConfig c = SmallTrainConfig();
  Trainer t(c, utts());
  auto params = t.model().Parameters();
  params[0].tensor.mutable_values()[0] = std::numeric_limits<double>::quiet_NaN();
  const auto before = AllParameters(t.model());
  try {
    t.Step();
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos) << e.what();
  }
  const auto after = AllParameters(t.model());
  for (std::size_t i = 1; i < before.size(); ++i) EXPECT_EQ(after[i], before[i]);
  EXPECT_EQ(t.step(), 0);
}

TEST_F(TrainerTest, FourChannelCheckpointRunsAtTwoChannels) {
  TempDir dir;
  auto four = MakeUtterances(2, 4, 0.4, 31);
  TrainConfig c = SmallTrainConfig();
  c.steps = 2;
  Trainer t(c, four);
  t.Run();
  t.SaveCheckpoint(dir.path() / "c4.ckpt");
  model::MimoTacModel m = model::LoadModel(dir.path() / "c4.ckpt");
  TrainExample ex = BuildExample(utts()[0], 0.0);
  ASSERT_EQ(ex.features.size(), 2u);
  EXPECT_EQ(m.Forward(nullptr, ex.features).size(), 2u);
}

TEST_F(TrainerTest, ValidationIsRecordedOnSchedule) {
  TrainConfig c = SmallTrainConfig();
  c.validate_every = 2;
  std::vector<Utterance> train(utts().begin(), utts().begin() + 2);
  std::vector<Utterance> val(utts().begin() + 2, utts().end());
  Trainer t(c, train, val);
  t.Run();
  EXPECT_LT(t.history()[0].validation, 0.0);
  EXPECT_GT(t.history()[1].validation, 0.0);
  EXPECT_LT(t.history()[2].validation, 0.0);
  EXPECT_GT(t.history()[3].validation, 0.0);
  std::ostringstream out;
  WriteLossHistory(t.history(), out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "step\tloss\tmask\tsignal\tgrad_norm\tlr\tvalidation");
}

TEST_F(TrainerTest, RejectsBadDatasets) {
  TrainConfig c = SmallTrainConfig();
  EXPECT_THROW(Trainer(c, {}), DataError);
  c.model.variant = model::Variant::kMimo;
  c.model.channels = 4;
  EXPECT_THROW(Trainer(c, utts()), DataError);
}

TEST(PlateauTest, DetectsWindowsThatStopImproving) {
  std::vector<StepRecord> h(4);
  for (int i = 0; i < 4; ++i) h[i].loss = 4.0 - i;
  EXPECT_FALSE(OnPlateau(h, 2));
  h[2].loss = h[3].loss = 3.5;
  EXPECT_TRUE(OnPlateau(h, 2));
  EXPECT_FALSE(OnPlateau(std::span(h).first(3), 2));
}

TEST(TrainConfigTest, JsonRoundTripAndUnknownKeys) {
  TrainConfig c = SmallTrainConfig();
  c.controller = ControllerMode::kBoth;
  c.loss.lambda_sig = 0.25;
  TrainConfig back = TrainConfigFromJson(ToJson(c));
  EXPECT_EQ(ToJson(back), ToJson(c));
  nlohmann::json j = ToJson(c);
  j["learning_rate"] = 0.1;
  EXPECT_THROW(TrainConfigFromJson(j), InvalidArgument);
  j = ToJson(c);
  j["batch_size"] = 0;
  EXPECT_THROW(TrainConfigFromJson(j), InvalidArgument);
}

}  // namespace
}  // namespace dereverb::train
