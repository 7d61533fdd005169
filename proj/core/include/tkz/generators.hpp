#pragma once

#include "tkz/feasibility.hpp"
#include "tkz/tensor3.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tkz {

enum class Family { MatrixGaussian, Classification, TensorGaussian, EqBound, Deblur };

std::string family_name(Family f);
/// Throws ParseError for an unknown name.
Family parse_family(const std::string& name);

/// Generator parameters. Which fields matter depends on the family:
///
///   matrix_gaussian  m_eq, m_ineq, l, p, block_size   (n forced to 1)
///   classification   m_ineq data points, l features, block_size
///   tensor_gaussian  m_eq, m_ineq, l, p, n
///   eq_bound         m_eq, l, p, n
///   deblur           l = image height, p = frames, n = image width,
///                    kernel_size, kernel_sigma, noisy, epsilon, noise_amplitude
struct GenSpec {
  Family family = Family::TensorGaussian;
  std::size_t m_eq = 50;
  std::size_t m_ineq = 70;
  std::size_t l = 50;
  std::size_t p = 7;
  std::size_t n = 10;
  std::size_t block_size = 1;
  std::uint64_t seed = 0;

  std::size_t kernel_size = 5;
  double kernel_sigma = 2.0;
  bool noisy = false;
  double epsilon = 0.2;
  double noise_amplitude = 0.2;

  /// Experiment defaults of each family.
  static GenSpec defaults(Family family);
};

struct GeneratedProblem {
  FeasibilityProblem problem;
  /// A feasible point known by construction.
  std::optional<Tensor3> witness;
};

GeneratedProblem gen_matrix_gaussian(const GenSpec& spec);
GeneratedProblem gen_classification(const GenSpec& spec);
GeneratedProblem gen_tensor_gaussian(const GenSpec& spec);
GeneratedProblem gen_eq_bound(const GenSpec& spec);
/// Phantom stack blurred with the Gaussian kernel of GenSpec; the phantom is the witness.
GeneratedProblem gen_deblur(const GenSpec& spec);
/// Dispatches on spec.family.
GeneratedProblem generate(const GenSpec& spec);

/// Normalized 1D Gaussian of odd length `size`.
std::vector<double> gaussian_kernel_1d(std::size_t size, double sigma);

/// l x l x n blur operator: slice k is g_wrap(k) * T with T the l x l banded
/// Toeplitz matrix of `kernel` (zero boundary) and g_wrap the kernel placed
/// circulantly along the tubes. Acting on an image stored as a lateral slice
/// X(:, j, :) (height along rows, width along tubes) it applies the separable
/// 2D blur kernel * kernel^T, zero-padded vertically and periodic horizontally.
Tensor3 build_blur_operator(std::size_t height, std::size_t width,
                            const std::vector<double>& kernel);

/// Exact mode: A * X = B with X >= 0. Noisy mode: B~ = B + N with N uniform on
/// [-noise_amplitude, noise_amplitude], encoded as the all-inequality system
/// [A; -A; -I] * X <= [B~ + eps; -(B~ - eps); 0].
/// `clean_rhs` is B = A * X_true.
FeasibilityProblem gen_deblur_problem(const Tensor3& op, const Tensor3& clean_rhs,
                                      bool noisy, double epsilon, double noise_amplitude,
                                      std::uint64_t seed);

/// Deterministic synthetic image stack, height x frames x width, values in [0, 255].
Tensor3 gen_phantom_stack(std::size_t height, std::size_t width, std::size_t frames);

}  // namespace tkz
