// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/model/model.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "dereverb/autodiff/ops.h"
#include "dereverb/common/error.h"
#include "gradcheck.h"

namespace dereverb::model {
namespace {

using testing::GradCheck;
using testing::RandomTensor;

ModelConfig Small(Variant variant, int channels = 0) {
  ModelConfig c;
  c.hidden = 12;
  c.proj = 6;
  c.layers = 2;
  c.history_order = 20;
  c.bands = 10;
  c.bins = 9;
  c.variant = variant;
  c.channels = channels;
  return c;
}

// Memory taps start at zero; randomize them so history paths are exercised.
void RandomizeMemory(const MimoTacModel& m, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 0.2);
  for (const auto& layer : m.dfsmn()) {
    for (double& w : layer.memory.mutable_values()) w = n(rng);
  }
}

std::vector<ad::Tensor> RandomInputs(const ModelConfig& c, int channels,
                                     std::size_t frames, std::mt19937_64& rng) {
  std::vector<ad::Tensor> xs;
  for (int i = 0; i < channels; ++i) {
    xs.push_back(RandomTensor({frames, std::size_t(c.input_dim())}, rng, 1.0,
                              false));
  }
  return xs;
}

// Expected count from the layer definitions, computed independently.
std::size_t ExpectedCount(const ModelConfig& c) {
  const std::size_t h = c.hidden, p = c.proj, in = c.input_dim(),
                    k2 = 2 * c.bins, taps = c.history_order + 1;
  const std::size_t streams = c.variant == Variant::kMimo ? c.channels : 1;
  std::size_t n = (streams * in * h + h) + h;        // input + slopes
  n += c.layers * ((h * p + p) + (p * h + h) + taps * h);
  if (c.variant == Variant::kMimoTac) {
    n += c.layers * (2 * (h * h + h + h) + (2 * h * h + h + h));
  }
  n += h * streams * k2 + streams * k2;
  return n;
}

TEST(ModelTest, ParameterCountMatchesLayerArithmetic) {
  for (Variant v : {Variant::kSiso, Variant::kMimo, Variant::kMimoTac}) {
    ModelConfig c = Small(v, 3);
    std::mt19937_64 rng(1);
    MimoTacModel m = MimoTacModel::Create(c, rng);
    EXPECT_EQ(m.CountParameters(), ExpectedCount(c)) << VariantName(v);
  }
}

TEST(ModelTest, PaperConfigurationIsNearReportedSize) {
  std::mt19937_64 rng(2);
  MimoTacModel m = MimoTacModel::Create(ModelConfig::Paper(), rng);
  const double count = static_cast<double>(m.CountParameters());
  EXPECT_EQ(m.CountParameters(), ExpectedCount(ModelConfig::Paper()));
  EXPECT_NEAR(count, 3.7e6, 0.37e6) << "count " << count;
}

TEST(ModelTest, ZeroLayerModelHasOnlyInputAndOutput) {
  ModelConfig c = Small(Variant::kMimoTac);
  c.layers = 0;
  std::mt19937_64 rng(3);
  MimoTacModel m = MimoTacModel::Create(c, rng);
  const std::size_t in = c.input_dim(), h = c.hidden, k2 = 2 * c.bins;
  EXPECT_EQ(m.CountParameters(), (in * h + h + h) + (h * k2 + k2));
}

TEST(ModelTest, WiderModelHasMoreParameters) {
  ModelConfig c = Small(Variant::kMimoTac);
  std::mt19937_64 rng(4);
  const std::size_t narrow = MimoTacModel::Create(c, rng).CountParameters();
  c.hidden *= 2;
  EXPECT_GT(MimoTacModel::Create(c, rng).CountParameters(), narrow);
}

TEST(ModelTest, ParameterNamesAreUnique) {
  std::mt19937_64 rng(5);
  MimoTacModel m = MimoTacModel::Create(Small(Variant::kMimoTac), rng);
  auto params = m.Parameters();
  std::vector<std::string> names;
  for (const auto& p : params) names.push_back(p.name);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(std::adjacent_find(names.begin(), names.end()), names.end());
}

TEST(ModelTest, OutputsLieStrictlyInsideUnitInterval) {
  for (Variant v : {Variant::kSiso, Variant::kMimo, Variant::kMimoTac}) {
    ModelConfig c = Small(v, 2);
    std::mt19937_64 rng(6);
    MimoTacModel m = MimoTacModel::Create(c, rng);
    auto xs = RandomInputs(c, 2, 15, rng);
    for (double& x : xs[0].mutable_values()) x *= 50.0;
    for (const auto& y : m.Forward(nullptr, xs)) {
      ASSERT_EQ(y.rows(), 15u);
      ASSERT_EQ(y.cols(), 2u * c.bins);
      for (double v : y.values()) {
        EXPECT_GT(v, -1.0);
        EXPECT_LT(v, 1.0);
      }
    }
  }
}

TEST(ModelTest, ZeroParametersGiveZeroMasks) {
  ModelConfig c = Small(Variant::kMimoTac);
  std::mt19937_64 rng(7);
  MimoTacModel m = MimoTacModel::Create(c, rng);
  for (auto p : m.Parameters()) {
    auto v = p.tensor.mutable_values();
    std::fill(v.begin(), v.end(), 0.0);
  }
  auto xs = RandomInputs(c, 3, 10, rng);
  for (const auto& y : m.Forward(nullptr, xs)) {
    for (double v : y.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(ModelTest, MaskSplitsRealAndImaginaryHalves) {
  ad::Tensor y = ad::Tensor::FromData({1, 4}, {0.1, 0.2, -0.3, 0.4});
  ComplexMask mask = OutputToMask(y);
  ASSERT_EQ(mask.values.cols(), 2u);
  EXPECT_EQ(mask.values(0, 0), std::complex<double>(0.1, -0.3));
  EXPECT_EQ(mask.values(0, 1), std::complex<double>(0.2, 0.4));
}

TEST(ModelTest, CausalInEveryVariant) {
  for (Variant v : {Variant::kSiso, Variant::kMimo, Variant::kMimoTac}) {
    ModelConfig c = Small(v, 2);
    std::mt19937_64 rng(8);
    MimoTacModel m = MimoTacModel::Create(c, rng);
    RandomizeMemory(m, rng);
    auto xs = RandomInputs(c, 2, 50, rng);
    auto ref = m.Forward(nullptr, xs);
    const std::size_t t = 23;
    std::vector<ad::Tensor> changed;
    for (const auto& x : xs) changed.push_back(x.Clone());
    const std::size_t w = c.input_dim();
    for (std::size_t i = (t + 1) * w; i < changed[1].size(); ++i) {
      changed[1].mutable_values()[i] = -changed[1].values()[i] + 3.0;
    }
    auto out = m.Forward(nullptr, changed);
    const std::size_t k2 = 2 * c.bins;
    for (std::size_t ch = 0; ch < 2; ++ch) {
      for (std::size_t i = 0; i < (t + 1) * k2; ++i) {
        ASSERT_EQ(out[ch].values()[i], ref[ch].values()[i])
            << VariantName(v) << " channel " << ch;
      }
    }
  }
}

TEST(ModelTest, ChannelPermutationPermutesOutputs) {
  for (Variant v : {Variant::kSiso, Variant::kMimoTac}) {
    for (int channels : {2, 3, 4, 6}) {
      ModelConfig c = Small(v);
      std::mt19937_64 rng(9 + channels);
      MimoTacModel m = MimoTacModel::Create(c, rng);
      RandomizeMemory(m, rng);
      auto xs = RandomInputs(c, channels, 12, rng);
      std::vector<std::size_t> perm(channels);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<ad::Tensor> permuted;
      for (std::size_t i : perm) permuted.push_back(xs[i]);
      auto ref = m.Forward(nullptr, xs);
      auto out = m.Forward(nullptr, permuted);
      for (int i = 0; i < channels; ++i) {
        const auto& a = out[i].values();
        const auto& b = ref[perm[i]].values();
        double worst = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
          worst = std::max(worst, std::abs(a[j] - b[j]));
        }
        // Channel averaging sums in a different order, hence not bit-exact.
        EXPECT_LE(worst, v == Variant::kSiso ? 0.0 : 1e-12)
            << VariantName(v) << " C=" << channels;
      }
    }
  }
}

TEST(ModelTest, IdenticalChannelsGiveIdenticalOutputs) {
  ModelConfig c = Small(Variant::kMimoTac);
  std::mt19937_64 rng(10);
  MimoTacModel m = MimoTacModel::Create(c, rng);
  RandomizeMemory(m, rng);
  auto one = RandomInputs(c, 1, 14, rng);
  std::vector<ad::Tensor> xs(4, one[0]);
  auto out = m.Forward(nullptr, xs);
  for (int ch = 1; ch < 4; ++ch) {
    EXPECT_TRUE(std::equal(out[ch].values().begin(), out[ch].values().end(),
                           out[0].values().begin()));
  }
}

TEST(ModelTest, MimoTacAcceptsAnyChannelCount) {
  ModelConfig c = Small(Variant::kMimoTac);
  std::mt19937_64 rng(11);
  MimoTacModel m = MimoTacModel::Create(c, rng);
  for (int channels : {1, 2, 4, 6}) {
    EXPECT_EQ(m.Forward(nullptr, RandomInputs(c, channels, 8, rng)).size(),
              std::size_t(channels));
  }
}

TEST(ModelTest, MimoRejectsOtherChannelCounts) {
  ModelConfig c = Small(Variant::kMimo, 4);
  std::mt19937_64 rng(12);
  MimoTacModel m = MimoTacModel::Create(c, rng);
  EXPECT_EQ(m.Forward(nullptr, RandomInputs(c, 4, 8, rng)).size(), 4u);
  EXPECT_THROW(m.Forward(nullptr, RandomInputs(c, 2, 8, rng)), InvalidArgument);
}

TEST(ModelTest, RejectsWrongFeatureWidthAndRaggedFrames) {
  ModelConfig c = Small(Variant::kMimoTac);
  std::mt19937_64 rng(13);
  MimoTacModel m = MimoTacModel::Create(c, rng);
  std::vector<ad::Tensor> bad = {RandomTensor({5, 3}, rng)};
  EXPECT_THROW(m.Forward(nullptr, bad), InvalidArgument);
  auto ragged = RandomInputs(c, 2, 5, rng);
  ragged[1] = RandomTensor({6, std::size_t(c.input_dim())}, rng);
  EXPECT_THROW(m.Forward(nullptr, ragged), InvalidArgument);
}

TEST(ModelTest, SisoChannelsDoNotInteract) {
  ModelConfig c = Small(Variant::kSiso);
  std::mt19937_64 rng(14);
  MimoTacModel m = MimoTacModel::Create(c, rng);
  auto xs = RandomInputs(c, 3, 10, rng);
  auto joint = m.Forward(nullptr, xs);
  for (int ch = 0; ch < 3; ++ch) {
    const ad::Tensor single[] = {xs[ch]};
    auto alone = m.Forward(nullptr, single);
    EXPECT_TRUE(std::equal(alone[0].values().begin(), alone[0].values().end(),
                           joint[ch].values().begin()));
  }
}

TEST(ModelTest, FullGraphGradientMatchesFiniteDifferences) {
  ModelConfig c;
  c.hidden = 8;
  c.proj = 4;
  c.layers = 2;
  c.history_order = 3;
  c.bands = 6;
  c.bins = 5;
  std::mt19937_64 rng(15);
  MimoTacModel m = MimoTacModel::Create(c, rng);
  RandomizeMemory(m, rng);
  auto xs = RandomInputs(c, 3, 7, rng);
  std::vector<ad::Tensor> targets;
  for (int ch = 0; ch < 3; ++ch) {
    targets.push_back(RandomTensor({7, 2 * std::size_t(c.bins)}, rng, 0.5, false));
  }
  auto loss = [&](ad::Tape* tape) {
    auto ys = m.Forward(tape, xs);
    ad::Tensor total = ad::WeightedSquaredError(tape, ys[0], targets[0]);
    for (int ch = 1; ch < 3; ++ch) {
      total = ad::Add(tape, total,
                      ad::WeightedSquaredError(tape, ys[ch], targets[ch]));
    }
    return total;
  };
  std::vector<ad::Tensor> params;
  for (const auto& p : m.Parameters()) params.push_back(p.tensor);
  auto report = GradCheck(loss, params, 300, rng);
  EXPECT_LT(report.max_rel_error, 1e-4) << report.worst;
}

}  // namespace
}  // namespace dereverb::model
