// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_AUTODIFF_TENSOR_H_
#define DEREVERB_AUTODIFF_TENSOR_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dereverb::ad {

using Shape = std::vector<std::size_t>;

std::size_t NumElements(const Shape& shape);
std::string ShapeString(const Shape& shape);

// Dense row-major array of doubles with an optional gradient buffer.
// Copies share storage; use Clone() for a deep copy.
class Tensor {
 public:
  Tensor() = default;

  static Tensor Zeros(Shape shape, bool requires_grad = false);
  static Tensor FromData(Shape shape, std::vector<double> values,
                         bool requires_grad = false);
  static Tensor Scalar(double value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t dim() const { return shape().size(); }
  std::size_t size() const;
  // Leading dimension, and product of the remaining ones.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> values() const;
  std::span<double> mutable_values() const;
  double item() const;

  bool requires_grad() const;
  void set_requires_grad(bool on);
  bool has_grad() const;
  // Empty span until a gradient has been accumulated.
  std::span<const double> grad() const;
  // Allocates a zero gradient on first use.
  std::span<double> mutable_grad() const;
  void ZeroGrad() const;

  Tensor Clone() const;
  bool SameStorage(const Tensor& other) const { return node_ == other.node_; }

 private:
  struct Node {
    Shape shape;
    std::vector<double> values;
    std::vector<double> grad;
    bool requires_grad = false;
  };
  std::shared_ptr<Node> node_;
};

struct NamedTensor {
  std::string name;
  Tensor tensor;
};
using ParameterList = std::vector<NamedTensor>;

std::size_t CountElements(const ParameterList& params);
void ZeroGrads(const ParameterList& params);

// Ordered record of differentiable operations. Single-threaded; independent
// tapes may run concurrently on shared read-only parameters only if
// gradients are not accumulated into the same tensors.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Appends a backward step. It must read its output's gradient and
  // accumulate into its inputs' gradients.
  void Record(std::function<void()> backward);

  // Seeds d(loss)/d(loss) = 1 and runs every recorded step once, newest
  // first. Throws if the loss is not a scalar produced on this tape.
  void Backward(Tensor& loss);

  std::size_t size() const { return steps_.size(); }
  void Clear() { steps_.clear(); }

 private:
  std::vector<std::function<void()>> steps_;
};

}  // namespace dereverb::ad

#endif  // DEREVERB_AUTODIFF_TENSOR_H_
