#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace tkz {

/// Dense real third-order tensor of shape rows x cols x tubes (m x l x n).
///
/// Storage is column-major with frontal slices contiguous: entry (i, j, k)
/// (0-based) lives at offset i + m * (j + l * k). Every frontal slice is
/// therefore a column-major m x l matrix, and every tube fiber (i, j, :) is a
/// strided sequence with stride m * l. This layout is used throughout the
/// project, including the on-disk TensorFile payload.
///
/// A matrix is the n == 1 case.
class Tensor3 {
 public:
  using SliceMap = Eigen::Map<Eigen::MatrixXd>;
  using ConstSliceMap = Eigen::Map<const Eigen::MatrixXd>;

  /// Zero tensor. All extents must be positive.
  Tensor3(std::size_t rows, std::size_t cols, std::size_t tubes);
  /// Adopts `data` in the documented layout; size must be rows*cols*tubes.
  Tensor3(std::size_t rows, std::size_t cols, std::size_t tubes,
          std::vector<double> data);

  static Tensor3 constant(std::size_t rows, std::size_t cols, std::size_t tubes,
                          double value);
  /// First frontal slice is the identity, the rest are zero.
  static Tensor3 identity(std::size_t size, std::size_t tubes);
  /// Wraps a matrix as an n == 1 tensor.
  static Tensor3 from_matrix(const Eigen::MatrixXd& m);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t tubes() const noexcept { return tubes_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool same_shape(const Tensor3& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           tubes_ == other.tubes_;
  }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + rows_ * (j + cols_ * k);
  }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data_[index(i, j, k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[index(i, j, k)];
  }

  /// Bounds-checked access; throws std::out_of_range.
  double& at(std::size_t i, std::size_t j, std::size_t k);
  double at(std::size_t i, std::size_t j, std::size_t k) const;

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  SliceMap slice(std::size_t k);
  ConstSliceMap slice(std::size_t k) const;

  /// The 1 x l x n row slice A(i, :, :).
  Tensor3 row_slice(std::size_t i) const;
  /// Rows `first .. first+count-1` as a count x l x n tensor.
  Tensor3 row_range(std::size_t first, std::size_t count) const;

  Tensor3& operator+=(const Tensor3& rhs);
  Tensor3& operator-=(const Tensor3& rhs);
  Tensor3& operator*=(double s) noexcept;

  friend Tensor3 operator+(Tensor3 lhs, const Tensor3& rhs) { return lhs += rhs; }
  friend Tensor3 operator-(Tensor3 lhs, const Tensor3& rhs) { return lhs -= rhs; }
  friend Tensor3 operator*(double s, Tensor3 t) { return t *= s; }

  friend bool operator==(const Tensor3& a, const Tensor3& b) {
    return a.same_shape(b) && a.data_ == b.data_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t tubes_;
  std::vector<double> data_;
};

/// Stacks rows of several tensors with equal cols/tubes on top of each other.
Tensor3 stack_rows(std::span<const Tensor3> parts);

}  // namespace tkz
