#pragma once

#include "tkz/fourier_tensor.hpp"
#include "tkz/tensor3.hpp"

#include <Eigen/Dense>

namespace tkz {

/// Frontal slices stacked vertically: (m*n) x l.
Eigen::MatrixXd unfold(const Tensor3& t);
/// Inverse of unfold; `tubes` must divide mat.rows().
Tensor3 fold(const Eigen::MatrixXd& mat, std::size_t tubes);

/// Block circulant matrix (m*n) x (l*n); block (r, c) is slice (r - c) mod n.
Eigen::MatrixXd bcirc(const Tensor3& t);

/// l x m x n tensor with bcirc(t_transpose(t)) == bcirc(t)^T.
Tensor3 t_transpose(const Tensor3& t);

double frob_norm(const Tensor3& t);
double sq_frob_norm(const Tensor3& t);
double inner(const Tensor3& a, const Tensor3& b);

/// Reference t-product fold(bcirc(a) * unfold(x)).
Tensor3 tprod_naive(const Tensor3& a, const Tensor3& x);

FourierTensor3 dft_tubes(const Tensor3& t);
/// Inverse DFT along tubes. Throws NumericalError when the imaginary part of
/// the result is not negligible (input not conjugate symmetric).
Tensor3 idft_tubes(const FourierTensor3& f);

/// t-product computed slice-wise in the Fourier domain.
Tensor3 tprod_fft(const FourierTensor3& a_hat, const Tensor3& x);
/// Convenience overload that transforms `a` first.
Tensor3 tprod_fft(const Tensor3& a, const Tensor3& x);

/// Entrywise max(t, 0).
Tensor3 positive_part(const Tensor3& t);

/// Largest singular value of Fourier frontal slice k, by power iteration
/// with relative tolerance `rel_tol` (exact vector norm for single-row slices).
double fourier_slice_spectral_norm(const FourierTensor3& a_hat, std::size_t k,
                                   double rel_tol = 1e-10);

}  // namespace tkz
