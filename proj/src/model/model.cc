// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/model/model.h"

#include <string>

#include "dereverb/autodiff/ops.h"
#include "dereverb/common/error.h"

namespace dereverb::model {

MimoTacModel MimoTacModel::Create(const ModelConfig& config,
                                  std::mt19937_64& rng) {
  config.Validate();
  MimoTacModel m;
  m.config_ = config;
  const bool mimo = config.variant == Variant::kMimo;
  const int streams = mimo ? config.channels : 1;
  m.input_ = PReluDense::Create(streams * config.input_dim(), config.hidden, rng);
  for (int l = 0; l < config.layers; ++l) {
    m.dfsmn_.push_back(
        DfsmnLayer::Create(config.hidden, config.proj, config.history_order, rng));
    if (config.variant == Variant::kMimoTac) {
      m.tac_.push_back(TacLayer::Create(config.hidden, rng));
    }
  }
  m.output_ = Dense::Create(config.hidden, streams * 2 * config.bins, rng);
  return m;
}

void MimoTacModel::CheckInputs(std::span<const ad::Tensor> features) const {
  DEREVERB_CHECK(!features.empty(), "model needs at least one channel");
  if (config_.variant == Variant::kMimo) {
    DEREVERB_CHECK(
        static_cast<int>(features.size()) == config_.channels,
        "mimo model was built for " + std::to_string(config_.channels) +
            " channels but got " + std::to_string(features.size()));
  }
  const std::size_t frames = features[0].rows();
  for (const auto& f : features) {
    DEREVERB_CHECK(f.dim() == 2 && f.rows() == frames,
                   "all channels must have the same frame count");
    DEREVERB_CHECK(static_cast<int>(f.cols()) == config_.input_dim(),
                   "feature width " + std::to_string(f.cols()) +
                       " does not match model input " +
                       std::to_string(config_.input_dim()));
  }
}

std::vector<ad::Tensor> MimoTacModel::Forward(
    ad::Tape* tape, std::span<const ad::Tensor> features) const {
  CheckInputs(features);
  const std::size_t two_k = 2 * static_cast<std::size_t>(config_.bins);

  if (config_.variant == Variant::kMimo) {
    ad::Tensor h = input_.Forward(tape, ad::ConcatFeatures(tape, features));
    for (const auto& layer : dfsmn_) h = layer.Forward(tape, h);
    ad::Tensor y = ad::Tanh(tape, output_.Forward(tape, h));
    std::vector<ad::Tensor> out;
    for (std::size_t c = 0; c < features.size(); ++c) {
      out.push_back(ad::SliceFeatures(tape, y, c * two_k, (c + 1) * two_k));
    }
    return out;
  }

  std::vector<ad::Tensor> hs;
  hs.reserve(features.size());
  for (const auto& f : features) hs.push_back(input_.Forward(tape, f));
  for (std::size_t l = 0; l < dfsmn_.size(); ++l) {
    for (auto& h : hs) h = dfsmn_[l].Forward(tape, h);
    if (!tac_.empty()) hs = tac_[l].Forward(tape, hs);
  }
  for (auto& h : hs) h = ad::Tanh(tape, output_.Forward(tape, h));
  return hs;
}

std::vector<ComplexMask> MimoTacModel::PredictMasks(
    std::span<const FeatureMatrix> features) const {
  std::vector<ad::Tensor> inputs;
  inputs.reserve(features.size());
  for (const auto& f : features) inputs.push_back(FeaturesToTensor(f));
  std::vector<ComplexMask> masks;
  for (const auto& y : Forward(nullptr, inputs)) masks.push_back(OutputToMask(y));
  return masks;
}

ad::ParameterList MimoTacModel::Parameters() const {
  ad::ParameterList params;
  input_.Collect("input", &params);
  for (std::size_t l = 0; l < dfsmn_.size(); ++l) {
    dfsmn_[l].Collect("dfsmn." + std::to_string(l), &params);
    if (l < tac_.size()) tac_[l].Collect("tac." + std::to_string(l), &params);
  }
  output_.Collect("output", &params);
  return params;
}

std::size_t MimoTacModel::CountParameters() const {
  return ad::CountElements(Parameters());
}

ad::Tensor FeaturesToTensor(const FeatureMatrix& features) {
  return ad::Tensor::FromData({features.num_frames(), features.dim()},
                              features.values.data());
}

ComplexMask OutputToMask(const ad::Tensor& output) {
  DEREVERB_CHECK(output.dim() == 2 && output.cols() % 2 == 0,
                 "mask output must be [T x 2K]");
  const std::size_t frames = output.rows(), k = output.cols() / 2;
  ComplexMask mask;
  mask.values = Array2D<std::complex<double>>(frames, k);
  auto v = output.values();
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b < k; ++b) {
      mask.values(t, b) = {v[t * 2 * k + b], v[t * 2 * k + k + b]};
    }
  }
  return mask;
}

}  // namespace dereverb::model
