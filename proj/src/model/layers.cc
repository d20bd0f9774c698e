// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/model/layers.h"

#include <cmath>

#include "dereverb/autodiff/ops.h"
#include "dereverb/common/error.h"

namespace dereverb::model {
namespace {

ad::Tensor Uniform(ad::Shape shape, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> v(ad::NumElements(shape));
  for (double& x : v) x = dist(rng);
  return ad::Tensor::FromData(std::move(shape), std::move(v), true);
}

}  // namespace

Dense Dense::Create(int in, int out, std::mt19937_64& rng) {
  DEREVERB_CHECK(in > 0 && out > 0, "dense layer dims must be positive");
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  Dense d;
  d.weight = Uniform({std::size_t(in), std::size_t(out)}, bound, rng);
  d.bias = Uniform({std::size_t(out)}, bound, rng);
  return d;
}

ad::Tensor Dense::Forward(ad::Tape* tape, const ad::Tensor& x) const {
  return ad::Linear(tape, x, weight, bias);
}

void Dense::Collect(const std::string& prefix, ad::ParameterList* out) const {
  out->push_back({prefix + ".weight", weight});
  out->push_back({prefix + ".bias", bias});
}

PReluDense PReluDense::Create(int in, int out, std::mt19937_64& rng) {
  PReluDense p;
  p.dense = Dense::Create(in, out, rng);
  p.slope = ad::Tensor::FromData({std::size_t(out)},
                                 std::vector<double>(out, 0.25), true);
  return p;
}

ad::Tensor PReluDense::Forward(ad::Tape* tape, const ad::Tensor& x) const {
  return ad::PRelu(tape, dense.Forward(tape, x), slope);
}

void PReluDense::Collect(const std::string& prefix,
                         ad::ParameterList* out) const {
  dense.Collect(prefix, out);
  out->push_back({prefix + ".slope", slope});
}

DfsmnLayer DfsmnLayer::Create(int hidden, int proj, int history_order,
                              std::mt19937_64& rng) {
  DEREVERB_CHECK(history_order >= 0, "history order must be >= 0");
  DfsmnLayer l;
  l.down = Dense::Create(hidden, proj, rng);
  l.up = Dense::Create(proj, hidden, rng);
  l.memory = ad::Tensor::Zeros(
      {std::size_t(history_order) + 1, std::size_t(hidden)}, true);
  return l;
}

ad::Tensor DfsmnLayer::Forward(ad::Tape* tape, const ad::Tensor& h) const {
  DEREVERB_CHECK(h.dim() == 2 && h.cols() == down.weight.rows(),
                 "DFSMN input width " + ad::ShapeString(h.shape()) +
                     " does not match layer");
  ad::Tensor p = up.Forward(tape, ad::Relu(tape, down.Forward(tape, h)));
  ad::Tensor mem = ad::CausalMemory(tape, p, memory);
  return ad::Add(tape, ad::Add(tape, h, p), mem);
}

void DfsmnLayer::Collect(const std::string& prefix,
                         ad::ParameterList* out) const {
  down.Collect(prefix + ".down", out);
  up.Collect(prefix + ".up", out);
  out->push_back({prefix + ".memory", memory});
}

TacLayer TacLayer::Create(int hidden, std::mt19937_64& rng) {
  TacLayer l;
  l.transform = PReluDense::Create(hidden, hidden, rng);
  l.average = PReluDense::Create(hidden, hidden, rng);
  l.concat = PReluDense::Create(2 * hidden, hidden, rng);
  return l;
}

std::vector<ad::Tensor> TacLayer::Forward(
    ad::Tape* tape, std::span<const ad::Tensor> channels) const {
  DEREVERB_CHECK(!channels.empty(), "TAC layer needs at least one channel");
  std::vector<ad::Tensor> t;
  t.reserve(channels.size());
  for (const auto& h : channels) t.push_back(transform.Forward(tape, h));
  ad::Tensor a = average.Forward(tape, ad::MeanOverChannels(tape, t));
  std::vector<ad::Tensor> out;
  out.reserve(channels.size());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    ad::Tensor mixed = concat.Forward(tape, ad::ConcatFeatures(tape, t[c], a));
    out.push_back(ad::Add(tape, channels[c], mixed));
  }
  return out;
}

void TacLayer::Collect(const std::string& prefix,
                       ad::ParameterList* out) const {
  transform.Collect(prefix + ".transform", out);
  average.Collect(prefix + ".average", out);
  concat.Collect(prefix + ".concat", out);
}

}  // namespace dereverb::model
