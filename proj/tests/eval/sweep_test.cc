// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/eval/sweep.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dereverb/common/error.h"
#include "dereverb/eval/enhance.h"
#include "dereverb/model/config.h"
#include "dereverb/model/model.h"
#include "dereverb/room/rir.h"
#include "train/train_fixtures.h"

namespace dereverb::eval {
namespace {

model::MimoTacModel TinyModel(std::uint64_t seed) {
  model::ModelConfig c = model::ModelConfig::Tiny();
  c.hidden = 8;
  c.proj = 8;
  std::mt19937_64 rng(seed);
  return model::MimoTacModel::Create(c, rng);
}

std::vector<EvalItem> Items(int count, int mics) {
  std::vector<EvalItem> items;
  for (const auto& u : testing::MakeUtterances(count, mics, 0.5, 21)) {
    items.push_back({u.id, u.mixture, u.direct, 0.4});
  }
  return items;
}

TEST(EnhanceTest, ZeroWeightModelIsSilent) {
  model::MimoTacModel m = TinyModel(1);
  for (const auto& p : m.Parameters()) {
    auto v = p.tensor.mutable_values();
    std::fill(v.begin(), v.end(), 0.0);
  }
  const auto items = Items(1, 2);
  const auto out = Enhance(m, items[0].mixture, 0.0);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& ch : out) {
    EXPECT_EQ(ch.size(), items[0].mixture[0].size());
    EXPECT_EQ(ch.PeakAbs(), 0.0);
  }
}

TEST(EnhanceTest, ControllerChangesOutput) {
  const model::MimoTacModel m = TinyModel(2);
  const auto items = Items(1, 2);
  const auto a = Enhance(m, items[0].mixture, 0.0);
  const auto b = Enhance(m, items[0].mixture, 1.0);
  EXPECT_NE(a[0], b[0]);
}

TEST(EnhanceTest, TacModelRunsAtAnyChannelCount) {
  const model::MimoTacModel m = TinyModel(3);
  for (int mics : {1, 2, 3, 6}) {
    const auto items = Items(1, mics);
    EXPECT_EQ(Enhance(m, items[0].mixture, 0.5).size(),
              static_cast<std::size_t>(mics));
  }
}

TEST(EnhanceTest, RejectsForeignSampleRate) {
  const model::MimoTacModel m = TinyModel(4);
  std::vector<AudioBuffer> mix = {AudioBuffer(std::vector<double>(800, 0.1), 8000)};
  EXPECT_THROW(Enhance(m, mix, 0.0), InvalidArgument);
}

TEST(ControllerSweepTest, OneRowPerControllerValue) {
  const model::MimoTacModel m = TinyModel(5);
  const auto items = Items(2, 2);
  const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  const ScoreReport r = ControllerSweep(m, items, grid, "direct");
  EXPECT_EQ(r.utterances.size(), 10u);
  const auto rows = r.ByController();
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].controller, grid[i]);
    EXPECT_TRUE(std::isfinite(rows[i].cd));
  }
}

TEST(ControllerSweepTest, SingleValueMatchesDirectScoring) {
  const model::MimoTacModel m = TinyModel(6);
  const auto items = Items(2, 2);
  const std::vector<double> grid = {0.0};
  const ScoreReport r = ControllerSweep(m, items, grid, "direct");
  ASSERT_EQ(r.utterances.size(), items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const UtteranceScore s =
        ScoreOutputs(items[i], Enhance(m, items[i].mixture, 0.0), 0.0);
    EXPECT_EQ(r.utterances[i].cd, s.cd);
    EXPECT_EQ(r.utterances[i].snr_db, s.snr_db);
  }
}

TEST(ControllerSweepTest, ThreadCountDoesNotChangeResults) {
  const model::MimoTacModel m = TinyModel(7);
  const auto items = Items(3, 2);
  const std::vector<double> grid = {0.0, 0.5, 1.0};
  SweepOptions serial;
  SweepOptions parallel;
  parallel.threads = 3;
  const ScoreReport a = ControllerSweep(m, items, grid, "direct", serial);
  const ScoreReport b = ControllerSweep(m, items, grid, "direct", parallel);
  ASSERT_EQ(a.utterances.size(), b.utterances.size());
  for (std::size_t i = 0; i < a.utterances.size(); ++i) {
    EXPECT_EQ(a.utterances[i].id, b.utterances[i].id);
    EXPECT_EQ(a.utterances[i].cd, b.utterances[i].cd);
    EXPECT_EQ(a.utterances[i].snr_db, b.utterances[i].snr_db);
  }
}

TEST(ControllerSweepTest, RejectsEmptySetAndBadControllers) {
  const model::MimoTacModel m = TinyModel(8);
  const std::vector<double> grid = {0.0};
  EXPECT_THROW(ControllerSweep(m, {}, grid, "direct"), InvalidArgument);
  const auto items = Items(1, 2);
  const std::vector<double> bad = {1.5};
  EXPECT_THROW(ControllerSweep(m, items, bad, "direct"), InvalidArgument);
}

TEST(ScoreMixturesTest, MixtureScoresWorseThanReferenceItself) {
  auto items = Items(2, 2);
  const ScoreReport r = ScoreMixtures(items, "direct");
  for (const auto& u : r.utterances) {
    EXPECT_GT(u.cd, 0.0);
    EXPECT_LT(u.snr_db, kSnrCapDb);
  }
}

}  // namespace
}  // namespace dereverb::eval
