// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_TRAIN_OPTIM_H_
#define DEREVERB_TRAIN_OPTIM_H_

#include <cstdint>
#include <vector>

#include "dereverb/autodiff/tensor.h"
#include "dereverb/model/checkpoint.h"

namespace dereverb::train {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(ad::ParameterList params, AdamOptions options);

  // Throws NumericError, leaving every parameter and moment untouched, if any
  // gradient is NaN or infinite. Parameters without a gradient count as zero.
  void Step();

  std::int64_t step() const { return step_; }
  double lr() const { return options_.lr; }
  void set_lr(double lr) { options_.lr = lr; }
  const AdamOptions& options() const { return options_; }
  const ad::ParameterList& params() const { return params_; }

  // Moments are stored as "adam.m.<param>" / "adam.v.<param>" blocks.
  void SaveState(model::Checkpoint* ckpt) const;
  void LoadState(const model::Checkpoint& ckpt);

 private:
  ad::ParameterList params_;
  AdamOptions options_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::int64_t step_ = 0;
};

double GlobalGradNorm(const ad::ParameterList& params);

// Scales all gradients by threshold / norm when the global L2 norm exceeds
// the threshold. Returns the factor applied (1 when untouched).
double ClipGradients(const ad::ParameterList& params, double threshold);

}  // namespace dereverb::train

#endif  // DEREVERB_TRAIN_OPTIM_H_
