// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_MODEL_MODEL_H_
#define DEREVERB_MODEL_MODEL_H_

#include <random>
#include <span>
#include <vector>

#include "dereverb/autodiff/tensor.h"
#include "dereverb/model/config.h"
#include "dereverb/model/layers.h"
#include "dereverb/signal/features.h"
#include "dereverb/signal/mask.h"

namespace dereverb::model {

// Mask estimator in three wirings:
//   siso      per-channel stack, channels never interact;
//   mimo      channels concatenated at the input, split at the output;
//   mimo-tac  per-channel stack with a TAC layer after every DFSMN layer.
// Per-channel parameters are shared by all channels.
class MimoTacModel {
 public:
  MimoTacModel() = default;
  static MimoTacModel Create(const ModelConfig& config, std::mt19937_64& rng);

  const ModelConfig& config() const { return config_; }
  // True for a default-constructed model with no parameters.
  bool empty() const { return !output_.weight.defined(); }

  // features[c] is [T x input_dim]; returns per-channel [T x 2K] Tanh
  // outputs, real parts in the first K columns.
  std::vector<ad::Tensor> Forward(ad::Tape* tape,
                                  std::span<const ad::Tensor> features) const;

  std::vector<ComplexMask> PredictMasks(
      std::span<const FeatureMatrix> features) const;

  // Stable names and order; tensors alias the model's storage.
  ad::ParameterList Parameters() const;
  std::size_t CountParameters() const;

  const Dense& input() const { return input_.dense; }
  const std::vector<DfsmnLayer>& dfsmn() const { return dfsmn_; }
  const std::vector<TacLayer>& tac() const { return tac_; }

 private:
  void CheckInputs(std::span<const ad::Tensor> features) const;

  ModelConfig config_;
  PReluDense input_;
  std::vector<DfsmnLayer> dfsmn_;
  std::vector<TacLayer> tac_;
  Dense output_;
};

ad::Tensor FeaturesToTensor(const FeatureMatrix& features);
// Splits a [T x 2K] output into a T x K complex mask.
ComplexMask OutputToMask(const ad::Tensor& output);

}  // namespace dereverb::model

#endif  // DEREVERB_MODEL_MODEL_H_
