#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tkz {

/// Tube-wise DFT of a real tensor, same shape and layout as Tensor3.
///
/// slice_sq_norms()[k] caches the squared Frobenius norm of frontal slice k.
/// For real input the data is conjugate symmetric along tubes:
/// entry (i, j, k) == conj(entry (i, j, (n - k) mod n)).
class FourierTensor3 {
 public:
  using cd = std::complex<double>;

  FourierTensor3(std::size_t rows, std::size_t cols, std::size_t tubes,
                 std::vector<cd> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t tubes() const noexcept { return tubes_; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + rows_ * (j + cols_ * k);
  }
  cd operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[index(i, j, k)];
  }

  std::span<const cd> data() const noexcept { return data_; }
  std::span<const double> slice_sq_norms() const noexcept { return slice_sq_norms_; }
  /// Sum of slice_sq_norms, i.e. n * ||A||_F^2 for the source tensor.
  double sq_norm() const noexcept;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t tubes_;
  std::vector<cd> data_;
  std::vector<double> slice_sq_norms_;
};

}  // namespace tkz
