#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace slicegap {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using Index = std::int64_t;

/// Dense row-major n-d array over a flat Eigen buffer. Rank is dynamic;
/// shapes follow the (batch, channel, spatial...) convention in the nets
/// and (z, y, x) for volumes.
template <typename Scalar>
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<Index> shape) : shape_(std::move(shape)) {
    data_.setZero(count(shape_));
  }

  Tensor(std::vector<Index> shape, ArrayX<Scalar> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != count(shape_)) throw std::invalid_argument("tensor: data/shape size mismatch");
  }

  static Tensor full(std::vector<Index> shape, Scalar v) {
    Tensor t(std::move(shape));
    t.data_.setConstant(t.data_.size(), v);
    return t;
  }

  static Tensor zeros_like(const Tensor& o) { return Tensor(o.shape_); }

  Index size() const { return data_.size(); }
  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<Index>& shape() const { return shape_; }
  Index dim(int i) const { return shape_.at(static_cast<std::size_t>(i)); }
  bool empty() const { return data_.size() == 0; }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }
  Scalar& operator[](Index i) { return data_[i]; }
  Scalar operator[](Index i) const { return data_[i]; }

  ArrayX<Scalar>& array() { return data_; }
  const ArrayX<Scalar>& array() const { return data_; }

  /// View the flat buffer as a rows x cols row-major matrix.
  Eigen::Map<MatrixX<Scalar>> matrix(Index rows, Index cols) {
    if (rows * cols != size()) throw std::invalid_argument("tensor: matrix view size mismatch");
    return Eigen::Map<MatrixX<Scalar>>(data_.data(), rows, cols);
  }
  Eigen::Map<const MatrixX<Scalar>> matrix(Index rows, Index cols) const {
    if (rows * cols != size()) throw std::invalid_argument("tensor: matrix view size mismatch");
    return Eigen::Map<const MatrixX<Scalar>>(data_.data(), rows, cols);
  }

  /// Same buffer under a new shape (element count must match).
  Tensor reshaped(std::vector<Index> shape) const {
    if (count(shape) != size()) throw std::invalid_argument("tensor: reshape size mismatch");
    return Tensor(std::move(shape), data_);
  }

  Scalar& at3(Index a, Index b, Index c) { return data_[(a * shape_[1] + b) * shape_[2] + c]; }
  Scalar at3(Index a, Index b, Index c) const { return data_[(a * shape_[1] + b) * shape_[2] + c]; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  bool all_finite() const { return data_.isFinite().all(); }

  template <typename S2>
  Tensor<S2> cast() const {
    return Tensor<S2>(shape_, data_.template cast<S2>());
  }

  static Index count(const std::vector<Index>& shape) {
    Index n = 1;
    for (Index d : shape) {
      if (d < 0) throw std::invalid_argument("tensor: negative dimension");
      n *= d;
    }
    return n;
  }

 private:
  std::vector<Index> shape_;
  ArrayX<Scalar> data_;
};

inline std::string shape_str(const std::vector<Index>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

}  // namespace slicegap
