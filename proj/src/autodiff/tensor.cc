// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/autodiff/tensor.h"

#include <algorithm>

#include "dereverb/common/error.h"

namespace dereverb::ad {

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor Tensor::Zeros(Shape shape, bool requires_grad) {
  const std::size_t n = NumElements(shape);
  return FromData(std::move(shape), std::vector<double>(n, 0.0),
                  requires_grad);
}

Tensor Tensor::FromData(Shape shape, std::vector<double> values,
                        bool requires_grad) {
  DEREVERB_CHECK(NumElements(shape) == values.size(),
                 "tensor data does not match shape " + ShapeString(shape));
  Tensor t;
  t.node_ = std::make_shared<Node>();
  t.node_->shape = std::move(shape);
  t.node_->values = std::move(values);
  t.node_->requires_grad = requires_grad;
  return t;
}

Tensor Tensor::Scalar(double value, bool requires_grad) {
  return FromData({1}, {value}, requires_grad);
}

const Shape& Tensor::shape() const {
  DEREVERB_CHECK(defined(), "use of an undefined tensor");
  return node_->shape;
}

std::size_t Tensor::size() const { return node_ ? node_->values.size() : 0; }

std::size_t Tensor::rows() const {
  const Shape& s = shape();
  return s.empty() ? 1 : s[0];
}

std::size_t Tensor::cols() const {
  const std::size_t r = rows();
  return r == 0 ? 0 : size() / r;
}

std::span<const double> Tensor::values() const {
  DEREVERB_CHECK(defined(), "use of an undefined tensor");
  return node_->values;
}

std::span<double> Tensor::mutable_values() const {
  DEREVERB_CHECK(defined(), "use of an undefined tensor");
  return node_->values;
}

double Tensor::item() const {
  DEREVERB_CHECK(size() == 1, "item() on a non-scalar tensor");
  return node_->values[0];
}

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }

void Tensor::set_requires_grad(bool on) {
  DEREVERB_CHECK(defined(), "use of an undefined tensor");
  node_->requires_grad = on;
}

bool Tensor::has_grad() const { return node_ && !node_->grad.empty(); }

std::span<const double> Tensor::grad() const {
  DEREVERB_CHECK(defined(), "use of an undefined tensor");
  return node_->grad;
}

std::span<double> Tensor::mutable_grad() const {
  DEREVERB_CHECK(defined(), "use of an undefined tensor");
  if (node_->grad.empty()) node_->grad.assign(node_->values.size(), 0.0);
  return node_->grad;
}

void Tensor::ZeroGrad() const {
  if (node_) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::Clone() const {
  Tensor t = FromData(shape(), node_->values, node_->requires_grad);
  t.node_->grad = node_->grad;
  return t;
}

std::size_t CountElements(const ParameterList& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.tensor.size();
  return n;
}

void ZeroGrads(const ParameterList& params) {
  for (auto p : params) p.tensor.ZeroGrad();
}

void Tape::Record(std::function<void()> backward) {
  steps_.push_back(std::move(backward));
}

void Tape::Backward(Tensor& loss) {
  DEREVERB_CHECK(loss.defined() && loss.size() == 1,
                 "Backward: loss must be a scalar");
  DEREVERB_CHECK(loss.requires_grad(),
                 "Backward: loss is not connected to any trainable tensor");
  loss.mutable_grad()[0] = 1.0;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) (*it)();
}

}  // namespace dereverb::ad
