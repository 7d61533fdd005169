#include "tkz/dft.hpp"

#include "tkz/error.hpp"

#include <cmath>
#include <numbers>

namespace tkz {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// exp(-2 pi i k / n) with the angle reduced first for accuracy.
std::complex<double> unit_root(std::size_t k, std::size_t n) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(k % n) /
                       static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

TubeDft::TubeDft(std::size_t n) : n_(n) {
  if (n == 0) throw DimensionError("DFT length must be positive");
  if (n == 1) {
    method_ = Method::Identity;
    return;
  }
  if (is_pow2(n)) {
    method_ = Method::Radix2;
    m_ = n;
  } else if (n <= kDirectCrossover) {
    method_ = Method::Direct;
    roots_.resize(n);
    for (std::size_t k = 0; k < n; ++k) roots_[k] = unit_root(k, n);
    scratch_.resize(n);
    return;
  } else {
    method_ = Method::Bluestein;
    m_ = next_pow2(2 * n - 1);
  }

  bitrev_.resize(m_);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < m_) ++bits;
  for (std::size_t i = 0; i < m_; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bitrev_[i] = r;
  }
  twiddle_.resize(m_ / 2);
  for (std::size_t k = 0; k < m_ / 2; ++k) twiddle_[k] = unit_root(k, m_);

  if (method_ == Method::Bluestein) {
    // chirp_t = exp(-pi i t^2 / n); t^2 reduced mod 2n keeps the angle small.
    chirp_.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t t2 = (t * t) % (2 * n);
      const double angle = -std::numbers::pi * static_cast<double>(t2) /
                           static_cast<double>(n);
      chirp_[t] = {std::cos(angle), std::sin(angle)};
    }
    kernel_hat_.assign(m_, cd{0.0, 0.0});
    kernel_hat_[0] = std::conj(chirp_[0]);
    for (std::size_t t = 1; t < n; ++t) {
      kernel_hat_[t] = std::conj(chirp_[t]);
      kernel_hat_[m_ - t] = std::conj(chirp_[t]);
    }
    radix2(kernel_hat_, false);
    scratch_.resize(m_);
  }
}

void TubeDft::forward(std::span<cd> tube) { transform(tube, false); }

void TubeDft::inverse(std::span<cd> tube) {
  transform(tube, true);
  if (n_ > 1) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : tube) v *= scale;
  }
}

void TubeDft::transform(std::span<cd> tube, bool inverse) {
  if (tube.size() != n_) throw DimensionError("DFT tube length mismatch");
  switch (method_) {
    case Method::Identity:
      return;
    case Method::Radix2:
      radix2(tube, inverse);
      return;
    case Method::Direct:
      direct(tube, inverse);
      return;
    case Method::Bluestein:
      bluestein(tube, inverse);
      return;
  }
}

// Unnormalized in-place iterative Cooley-Tukey of length m_.
void TubeDft::radix2(std::span<cd> data, bool inverse) const {
  const std::size_t m = m_;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = bitrev_[i];
    if (i < r) std::swap(data[i], data[r]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = m / len;
    for (std::size_t start = 0; start < m; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cd w = twiddle_[k * step];
        if (inverse) w = std::conj(w);
        const cd u = data[start + k];
        const cd v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

void TubeDft::direct(std::span<cd> tube, bool inverse) {
  const std::size_t n = n_;
  for (std::size_t f = 0; f < n; ++f) {
    cd acc{0.0, 0.0};
    std::size_t idx = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const cd w = inverse ? std::conj(roots_[idx]) : roots_[idx];
      acc += tube[t] * w;
      idx += f;
      if (idx >= n) idx -= n;
    }
    scratch_[f] = acc;
  }
  for (std::size_t f = 0; f < n; ++f) tube[f] = scratch_[f];
}

// y_f = conj?(c_f) * sum_t (x_t c_t) conj(c_{f-t}), c_t = exp(-pi i t^2/n).
void TubeDft::bluestein(std::span<cd> tube, bool inverse) {
  const std::size_t n = n_;
  auto chirp = [&](std::size_t t) {
    return inverse ? std::conj(chirp_[t]) : chirp_[t];
  };
  std::fill(scratch_.begin(), scratch_.end(), cd{0.0, 0.0});
  for (std::size_t t = 0; t < n; ++t) scratch_[t] = tube[t] * chirp(t);
  radix2(scratch_, false);
  if (inverse) {
    // Kernel for the inverse is the conjugate chirp; its transform is the
    // index-reversed conjugate of kernel_hat_.
    for (std::size_t k = 0; k < m_; ++k) {
      scratch_[k] *= std::conj(kernel_hat_[(m_ - k) % m_]);
    }
  } else {
    for (std::size_t k = 0; k < m_; ++k) scratch_[k] *= kernel_hat_[k];
  }
  radix2(scratch_, true);
  const double scale = 1.0 / static_cast<double>(m_);
  for (std::size_t f = 0; f < n; ++f) tube[f] = scratch_[f] * scale * chirp(f);
}

}  // namespace tkz
