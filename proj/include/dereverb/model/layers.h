// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_MODEL_LAYERS_H_
#define DEREVERB_MODEL_LAYERS_H_

#include <random>
#include <span>
#include <string>
#include <vector>

#include "dereverb/autodiff/tensor.h"

namespace dereverb::model {

// Fully-connected layer, weights stored [in x out].
struct Dense {
  ad::Tensor weight;
  ad::Tensor bias;

  // Weights and bias drawn from U(-1/sqrt(in), 1/sqrt(in)).
  static Dense Create(int in, int out, std::mt19937_64& rng);
  ad::Tensor Forward(ad::Tape* tape, const ad::Tensor& x) const;
  void Collect(const std::string& prefix, ad::ParameterList* out) const;
  int in_dim() const { return static_cast<int>(weight.rows()); }
  int out_dim() const { return static_cast<int>(weight.cols()); }
};

// Dense followed by PReLU with one learnable slope per output (init 0.25).
struct PReluDense {
  Dense dense;
  ad::Tensor slope;

  static PReluDense Create(int in, int out, std::mt19937_64& rng);
  ad::Tensor Forward(ad::Tape* tape, const ad::Tensor& x) const;
  void Collect(const std::string& prefix, ad::ParameterList* out) const;
};

// p_t = up(relu(down(h_t))); out_t = h_t + p_t + sum_{tau=0..order} w_tau * p_{t-tau}.
// Frames before the start read as zeros; there are no look-ahead taps.
struct DfsmnLayer {
  Dense down;        // hidden -> proj
  Dense up;          // proj -> hidden
  ad::Tensor memory;  // [(order + 1) x hidden], zero at init

  static DfsmnLayer Create(int hidden, int proj, int history_order,
                           std::mt19937_64& rng);
  int history_order() const { return static_cast<int>(memory.rows()) - 1; }
  ad::Tensor Forward(ad::Tape* tape, const ad::Tensor& h) const;
  void Collect(const std::string& prefix, ad::ParameterList* out) const;
};

// Transform-average-concatenate exchange across channels:
//   t_c = T(h_c), a = A(mean_c t_c), out_c = h_c + C([t_c, a]).
struct TacLayer {
  PReluDense transform;  // hidden -> hidden
  PReluDense average;    // hidden -> hidden
  PReluDense concat;     // 2 hidden -> hidden

  static TacLayer Create(int hidden, std::mt19937_64& rng);
  std::vector<ad::Tensor> Forward(ad::Tape* tape,
                                  std::span<const ad::Tensor> channels) const;
  void Collect(const std::string& prefix, ad::ParameterList* out) const;
};

}  // namespace dereverb::model

#endif  // DEREVERB_MODEL_LAYERS_H_
