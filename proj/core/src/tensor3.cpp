#include "tkz/tensor3.hpp"

#include "tkz/error.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tkz {

namespace {

void require_positive(std::size_t m, std::size_t l, std::size_t n) {
  if (m == 0 || l == 0 || n == 0) {
    throw DimensionError("tensor extents must be positive, got " +
                         std::to_string(m) + "x" + std::to_string(l) + "x" +
                         std::to_string(n));
  }
}

void require_same_shape(const Tensor3& a, const Tensor3& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": shape mismatch " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         "x" + std::to_string(a.tubes()) + " vs " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                         "x" + std::to_string(b.tubes()));
  }
}

}  // namespace

Tensor3::Tensor3(std::size_t rows, std::size_t cols, std::size_t tubes)
    : rows_(rows), cols_(cols), tubes_(tubes) {
  require_positive(rows, cols, tubes);
  data_.assign(rows * cols * tubes, 0.0);
}

Tensor3::Tensor3(std::size_t rows, std::size_t cols, std::size_t tubes,
                 std::vector<double> data)
    : rows_(rows), cols_(cols), tubes_(tubes), data_(std::move(data)) {
  require_positive(rows, cols, tubes);
  if (data_.size() != rows * cols * tubes) {
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match extents product " +
                         std::to_string(rows * cols * tubes));
  }
}

Tensor3 Tensor3::constant(std::size_t rows, std::size_t cols, std::size_t tubes,
                          double value) {
  require_positive(rows, cols, tubes);
  return Tensor3(rows, cols, tubes,
                 std::vector<double>(rows * cols * tubes, value));
}

Tensor3 Tensor3::identity(std::size_t size, std::size_t tubes) {
  Tensor3 t(size, size, tubes);
  for (std::size_t i = 0; i < size; ++i) t(i, i, 0) = 1.0;
  return t;
}

Tensor3 Tensor3::from_matrix(const Eigen::MatrixXd& m) {
  Tensor3 t(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), 1);
  t.slice(0) = m;
  return t;
}

double& Tensor3::at(std::size_t i, std::size_t j, std::size_t k) {
  if (i >= rows_ || j >= cols_ || k >= tubes_) {
    throw std::out_of_range("tensor index (" + std::to_string(i) + "," +
                            std::to_string(j) + "," + std::to_string(k) +
                            ") out of range");
  }
  return (*this)(i, j, k);
}

double Tensor3::at(std::size_t i, std::size_t j, std::size_t k) const {
  return const_cast<Tensor3*>(this)->at(i, j, k);
}

Tensor3::SliceMap Tensor3::slice(std::size_t k) {
  if (k >= tubes_) throw std::out_of_range("frontal slice index out of range");
  return SliceMap(data_.data() + rows_ * cols_ * k,
                  static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
}

Tensor3::ConstSliceMap Tensor3::slice(std::size_t k) const {
  if (k >= tubes_) throw std::out_of_range("frontal slice index out of range");
  return ConstSliceMap(data_.data() + rows_ * cols_ * k,
                       static_cast<Eigen::Index>(rows_),
                       static_cast<Eigen::Index>(cols_));
}

Tensor3 Tensor3::row_slice(std::size_t i) const { return row_range(i, 1); }

Tensor3 Tensor3::row_range(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > rows_) {
    throw std::out_of_range("row range out of range");
  }
  Tensor3 out(count, cols_, tubes_);
  for (std::size_t k = 0; k < tubes_; ++k)
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < count; ++i) out(i, j, k) = (*this)(first + i, j, k);
  return out;
}

Tensor3& Tensor3::operator+=(const Tensor3& rhs) {
  require_same_shape(*this, rhs, "tensor +=");
  for (std::size_t q = 0; q < data_.size(); ++q) data_[q] += rhs.data_[q];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& rhs) {
  require_same_shape(*this, rhs, "tensor -=");
  for (std::size_t q = 0; q < data_.size(); ++q) data_[q] -= rhs.data_[q];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

Tensor3 stack_rows(std::span<const Tensor3> parts) {
  if (parts.empty()) throw DimensionError("stack_rows: no parts");
  const std::size_t l = parts.front().cols();
  const std::size_t n = parts.front().tubes();
  std::size_t m = 0;
  for (const auto& p : parts) {
    if (p.cols() != l || p.tubes() != n) {
      throw DimensionError("stack_rows: parts differ in cols or tubes");
    }
    m += p.rows();
  }
  Tensor3 out(m, l, n);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < l; ++j)
        for (std::size_t i = 0; i < p.rows(); ++i) out(offset + i, j, k) = p(i, j, k);
    offset += p.rows();
  }
  return out;
}

}  // namespace tkz
