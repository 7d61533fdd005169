#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tkz {

/// Discrete Fourier transform of a single tube fiber of fixed length n.
///
/// forward computes y_f = sum_t x_t exp(-2 pi i f t / n), i.e. sqrt(n) F_n x
/// with F_n the unitary DFT matrix; inverse divides by n, so
/// inverse(forward(x)) == x.
///
/// Any n >= 1 is supported: powers of two use an iterative radix-2 FFT,
/// other lengths up to kDirectCrossover use a tabulated O(n^2) DFT, and longer
/// lengths use Bluestein's chirp-z reduction to a power-of-two FFT.
///
/// Instances hold scratch space and must not be shared between threads.
class TubeDft {
 public:
  using cd = std::complex<double>;
  static constexpr std::size_t kDirectCrossover = 64;

  explicit TubeDft(std::size_t n);

  std::size_t length() const noexcept { return n_; }

  void forward(std::span<cd> tube);
  void inverse(std::span<cd> tube);

 private:
  enum class Method { Identity, Radix2, Direct, Bluestein };

  void transform(std::span<cd> tube, bool inverse);
  void radix2(std::span<cd> data, bool inverse) const;
  void direct(std::span<cd> tube, bool inverse);
  void bluestein(std::span<cd> tube, bool inverse);

  std::size_t n_;
  Method method_;
  // radix-2 tables for length m_ (n_ itself, or the Bluestein padding)
  std::size_t m_ = 0;
  std::vector<std::size_t> bitrev_;
  std::vector<cd> twiddle_;  // exp(-2 pi i k / m_), k < m_/2
  // direct DFT table: exp(-2 pi i k / n_), k < n_
  std::vector<cd> roots_;
  // Bluestein chirp and transformed kernel
  std::vector<cd> chirp_;
  std::vector<cd> kernel_hat_;
  std::vector<cd> scratch_;
};

}  // namespace tkz
