// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_COMMON_ARRAY2D_H_
#define DEREVERB_COMMON_ARRAY2D_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dereverb {

// Dense row-major matrix.
template <typename T>
class Array2D {
 public:
  Array2D() = default;
  Array2D(std::size_t rows, std::size_t cols, T fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) {
    return std::span<T>(data_).subspan(r * cols_, cols_);
  }
  std::span<const T> row(std::size_t r) const {
    return std::span<const T>(data_).subspan(r * cols_, cols_);
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool SameShape(const Array2D& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool operator==(const Array2D& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace dereverb

#endif  // DEREVERB_COMMON_ARRAY2D_H_
