// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_AUTODIFF_OPS_H_
#define DEREVERB_AUTODIFF_OPS_H_

#include <span>

#include "dereverb/autodiff/tensor.h"

// Differentiable primitives. Each takes the tape to record on, or nullptr
// for a forward-only evaluation. An output requires grad when a tape is
// given and any input requires grad. Broadcasting is limited to bias rows
// and per-feature slopes.
namespace dereverb::ad {

// x[T x in] W[in x out] + b[out].
Tensor Linear(Tape* tape, const Tensor& x, const Tensor& w, const Tensor& b);

// x where x > 0, slope[f] * x otherwise; slope has one entry per column.
Tensor PRelu(Tape* tape, const Tensor& x, const Tensor& slope);

Tensor Relu(Tape* tape, const Tensor& x);
Tensor Tanh(Tape* tape, const Tensor& x);

Tensor Add(Tape* tape, const Tensor& a, const Tensor& b);
Tensor Mul(Tape* tape, const Tensor& a, const Tensor& b);
Tensor Scale(Tape* tape, const Tensor& x, double factor);

// Element-wise mean of equally shaped tensors.
Tensor MeanOverChannels(Tape* tape, std::span<const Tensor> xs);

// Joins [T x F_i] tensors along the feature axis.
Tensor ConcatFeatures(Tape* tape, std::span<const Tensor> xs);
Tensor ConcatFeatures(Tape* tape, const Tensor& a, const Tensor& b);

// Columns [begin, end) of a [T x F] tensor.
Tensor SliceFeatures(Tape* tape, const Tensor& x, std::size_t begin,
                     std::size_t end);
// Rows [begin, end) of a [T x F] tensor.
Tensor SliceFrames(Tape* tape, const Tensor& x, std::size_t begin,
                   std::size_t end);

// out[t] = sum_{tau=0..order} w[tau] (.) p[t - tau], with p[t < 0] = 0.
// p is [T x F], w is [(order + 1) x F].
Tensor CausalMemory(Tape* tape, const Tensor& p, const Tensor& w);

// Sum of all elements, as a scalar.
Tensor Sum(Tape* tape, const Tensor& x);

// sum_r weight[r] * sum_c (pred[r, c] - target[r, c])^2. The target is a
// constant; `row_weights` may be empty (all ones) or hold one entry per row.
Tensor WeightedSquaredError(Tape* tape, const Tensor& pred,
                            const Tensor& target,
                            std::span<const double> row_weights = {});

}  // namespace dereverb::ad

#endif  // DEREVERB_AUTODIFF_OPS_H_
