#include "tkz/tensor_ops.hpp"

#include "tkz/dft.hpp"
#include "tkz/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tkz {

using cd = std::complex<double>;

FourierTensor3::FourierTensor3(std::size_t rows, std::size_t cols,
                               std::size_t tubes, std::vector<cd> data)
    : rows_(rows), cols_(cols), tubes_(tubes), data_(std::move(data)) {
  if (rows == 0 || cols == 0 || tubes == 0) {
    throw DimensionError("Fourier tensor extents must be positive");
  }
  if (data_.size() != rows * cols * tubes) {
    throw DimensionError("Fourier tensor data length mismatch");
  }
  slice_sq_norms_.assign(tubes, 0.0);
  const std::size_t per_slice = rows * cols;
  for (std::size_t k = 0; k < tubes; ++k) {
    double s = 0.0;
    for (std::size_t q = 0; q < per_slice; ++q) s += std::norm(data_[k * per_slice + q]);
    slice_sq_norms_[k] = s;
  }
}

double FourierTensor3::sq_norm() const noexcept {
  return std::accumulate(slice_sq_norms_.begin(), slice_sq_norms_.end(), 0.0);
}

namespace {

void check_product_dims(std::size_t a_cols, std::size_t a_tubes, const Tensor3& x,
                        const char* what) {
  if (a_cols != x.rows() || a_tubes != x.tubes()) {
    throw DimensionError(std::string(what) + ": operator is ?x" +
                         std::to_string(a_cols) + "x" + std::to_string(a_tubes) +
                         " but operand is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + "x" + std::to_string(x.tubes()));
  }
}

std::vector<cd> transform_tubes(const Tensor3& t) {
  const std::size_t mlen = t.rows() * t.cols();
  const std::size_t n = t.tubes();
  std::vector<cd> out(t.size());
  TubeDft dft(n);
  std::vector<cd> tube(n);
  for (std::size_t q = 0; q < mlen; ++q) {
    for (std::size_t k = 0; k < n; ++k) tube[k] = t.data()[q + mlen * k];
    dft.forward(tube);
    for (std::size_t k = 0; k < n; ++k) out[q + mlen * k] = tube[k];
  }
  return out;
}

// Inverse-transforms tube data in place and extracts the real part, after
// checking that the imaginary residue is below 1e-10 * max(||real||, floor).
Tensor3 inverse_to_real(std::size_t m, std::size_t l, std::size_t n,
                        std::vector<cd>& data, double scale_floor) {
  const std::size_t mlen = m * l;
  TubeDft dft(n);
  std::vector<cd> tube(n);
  Tensor3 out(m, l, n);
  double real_sq = 0.0;
  double imag_sq = 0.0;
  for (std::size_t q = 0; q < mlen; ++q) {
    for (std::size_t k = 0; k < n; ++k) tube[k] = data[q + mlen * k];
    dft.inverse(tube);
    for (std::size_t k = 0; k < n; ++k) {
      out.data()[q + mlen * k] = tube[k].real();
      real_sq += tube[k].real() * tube[k].real();
      imag_sq += tube[k].imag() * tube[k].imag();
    }
  }
  const double limit = 1e-10 * std::max(std::sqrt(real_sq), scale_floor);
  if (std::sqrt(imag_sq) > limit) {
    throw NumericalError("inverse DFT left an imaginary residue of " +
                         std::to_string(std::sqrt(imag_sq)) +
                         " (limit " + std::to_string(limit) + ")");
  }
  return out;
}

}  // namespace

Eigen::MatrixXd unfold(const Tensor3& t) {
  const auto m = static_cast<Eigen::Index>(t.rows());
  Eigen::MatrixXd out(m * static_cast<Eigen::Index>(t.tubes()),
                      static_cast<Eigen::Index>(t.cols()));
  for (std::size_t k = 0; k < t.tubes(); ++k) {
    out.middleRows(m * static_cast<Eigen::Index>(k), m) = t.slice(k);
  }
  return out;
}

Tensor3 fold(const Eigen::MatrixXd& mat, std::size_t tubes) {
  if (tubes == 0 || mat.rows() % static_cast<Eigen::Index>(tubes) != 0) {
    throw DimensionError("fold: row count not divisible by tube count");
  }
  const Eigen::Index m = mat.rows() / static_cast<Eigen::Index>(tubes);
  Tensor3 t(static_cast<std::size_t>(m), static_cast<std::size_t>(mat.cols()), tubes);
  for (std::size_t k = 0; k < tubes; ++k) {
    t.slice(k) = mat.middleRows(m * static_cast<Eigen::Index>(k), m);
  }
  return t;
}

Eigen::MatrixXd bcirc(const Tensor3& t) {
  const auto m = static_cast<Eigen::Index>(t.rows());
  const auto l = static_cast<Eigen::Index>(t.cols());
  const std::size_t n = t.tubes();
  Eigen::MatrixXd out(m * static_cast<Eigen::Index>(n), l * static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out.block(m * static_cast<Eigen::Index>(r), l * static_cast<Eigen::Index>(c), m, l) =
          t.slice((r + n - c) % n);
    }
  }
  return out;
}

Tensor3 t_transpose(const Tensor3& t) {
  const std::size_t n = t.tubes();
  Tensor3 out(t.cols(), t.rows(), n);
  for (std::size_t k = 0; k < n; ++k) {
    out.slice(k) = t.slice((n - k) % n).transpose();
  }
  return out;
}

double sq_frob_norm(const Tensor3& t) {
  double s = 0.0;
  for (double v : t.data()) s += v * v;
  return s;
}

double frob_norm(const Tensor3& t) { return std::sqrt(sq_frob_norm(t)); }

double inner(const Tensor3& a, const Tensor3& b) {
  if (!a.same_shape(b)) throw DimensionError("inner: shape mismatch");
  double s = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) s += a.data()[q] * b.data()[q];
  return s;
}

Tensor3 tprod_naive(const Tensor3& a, const Tensor3& x) {
  check_product_dims(a.cols(), a.tubes(), x, "tprod_naive");
  const Eigen::MatrixXd prod = bcirc(a) * unfold(x);
  return fold(prod, a.tubes());
}

FourierTensor3 dft_tubes(const Tensor3& t) {
  return FourierTensor3(t.rows(), t.cols(), t.tubes(), transform_tubes(t));
}

Tensor3 idft_tubes(const FourierTensor3& f) {
  std::vector<cd> data(f.data().begin(), f.data().end());
  const double floor = 1e-6 * std::sqrt(f.sq_norm() / static_cast<double>(f.tubes()));
  return inverse_to_real(f.rows(), f.cols(), f.tubes(), data, floor);
}

Tensor3 tprod_fft(const FourierTensor3& a_hat, const Tensor3& x) {
  check_product_dims(a_hat.cols(), a_hat.tubes(), x, "tprod_fft");
  const std::size_t m = a_hat.rows();
  const std::size_t l = a_hat.cols();
  const std::size_t p = x.cols();
  const std::size_t n = a_hat.tubes();
  const std::vector<cd> x_hat = transform_tubes(x);
  std::vector<cd> c_hat(m * p * n);
  const auto a = a_hat.data();
  for (std::size_t k = 0; k < n; ++k) {
    const cd* ak = a.data() + m * l * k;
    const cd* xk = x_hat.data() + l * p * k;
    cd* ck = c_hat.data() + m * p * k;
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t i = 0; i < m; ++i) {
        cd acc{0.0, 0.0};
        for (std::size_t j = 0; j < l; ++j) acc += ak[i + m * j] * xk[j + l * c];
        ck[i + m * c] = acc;
      }
    }
  }
  const double floor =
      1e-6 * std::sqrt(a_hat.sq_norm() / static_cast<double>(n)) * frob_norm(x);
  return inverse_to_real(m, p, n, c_hat, floor);
}

Tensor3 tprod_fft(const Tensor3& a, const Tensor3& x) {
  return tprod_fft(dft_tubes(a), x);
}

Tensor3 positive_part(const Tensor3& t) {
  Tensor3 out = t;
  for (double& v : out.data()) v = std::max(v, 0.0);
  return out;
}

double fourier_slice_spectral_norm(const FourierTensor3& a_hat, std::size_t k,
                                   double rel_tol) {
  if (k >= a_hat.tubes()) throw std::out_of_range("Fourier slice index out of range");
  const std::size_t m = a_hat.rows();
  const std::size_t l = a_hat.cols();
  const cd* ak = a_hat.data().data() + m * l * k;
  if (m == 1 || l == 1) return std::sqrt(a_hat.slice_sq_norms()[k]);
  if (a_hat.slice_sq_norms()[k] == 0.0) return 0.0;

  // Power iteration on A^H A with a deterministic, generic start vector.
  std::vector<cd> v(l), w(m), u(l);
  for (std::size_t j = 0; j < l; ++j) v[j] = cd{1.0 + 0.1 * static_cast<double>(j), 0.05};
  double estimate = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    double vnorm = 0.0;
    for (const auto& z : v) vnorm += std::norm(z);
    vnorm = std::sqrt(vnorm);
    for (auto& z : v) z /= vnorm;
    for (std::size_t i = 0; i < m; ++i) {
      cd acc{0.0, 0.0};
      for (std::size_t j = 0; j < l; ++j) acc += ak[i + m * j] * v[j];
      w[i] = acc;
    }
    for (std::size_t j = 0; j < l; ++j) {
      cd acc{0.0, 0.0};
      for (std::size_t i = 0; i < m; ++i) acc += std::conj(ak[i + m * j]) * w[i];
      u[j] = acc;
    }
    double wnorm = 0.0;
    for (const auto& z : w) wnorm += std::norm(z);
    const double next = std::sqrt(wnorm);
    if (std::abs(next - estimate) <= rel_tol * next) return next;
    estimate = next;
    v.swap(u);
    if (std::all_of(v.begin(), v.end(), [](const cd& z) { return z == cd{}; })) {
      return estimate;
    }
  }
  return estimate;
}

}  // namespace tkz
