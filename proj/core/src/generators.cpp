#include "tkz/generators.hpp"

#include "tkz/error.hpp"
#include "tkz/random.hpp"
#include "tkz/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tkz {

std::string family_name(Family f) {
  switch (f) {
    case Family::MatrixGaussian: return "matrix_gaussian";
    case Family::Classification: return "classification";
    case Family::TensorGaussian: return "tensor_gaussian";
    case Family::EqBound: return "eq_bound";
    case Family::Deblur: return "deblur";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::MatrixGaussian, Family::Classification, Family::TensorGaussian,
                   Family::EqBound, Family::Deblur}) {
    if (family_name(f) == name) return f;
  }
  throw ParseError("unknown problem family '" + name + "'");
}

GenSpec GenSpec::defaults(Family family) {
  GenSpec s;
  s.family = family;
  switch (family) {
    case Family::MatrixGaussian:
      s.m_eq = 500; s.m_ineq = 700; s.l = 100; s.p = 7; s.n = 1; s.block_size = 10;
      break;
    case Family::Classification:
      s.m_eq = 0; s.m_ineq = 10000; s.l = 100; s.p = 1; s.n = 1; s.block_size = 10;
      break;
    case Family::TensorGaussian:
      s.m_eq = 50; s.m_ineq = 70; s.l = 50; s.p = 7; s.n = 10;
      break;
    case Family::EqBound:
      s.m_eq = 100; s.m_ineq = 0; s.l = 50; s.p = 7; s.n = 10;
      break;
    case Family::Deblur:
      s.m_eq = 0; s.m_ineq = 0; s.l = 128; s.p = 12; s.n = 128;
      break;
  }
  return s;
}

namespace {

Tensor3 gaussian_tensor(std::size_t m, std::size_t l, std::size_t n, Rng& rng) {
  Tensor3 t(m, l, n);
  for (double& v : t.data()) v = rng.normal();
  return t;
}

void require_positive(std::size_t v, const char* what) {
  if (v == 0) throw InvalidProblem(std::string(what) + " must be positive");
}

// Shared by the matrix and tensor Gaussian families.
GeneratedProblem gaussian_system(const GenSpec& spec, std::size_t n, bool with_paving) {
  const std::size_t m = spec.m_eq + spec.m_ineq;
  require_positive(m, "row count");
  require_positive(spec.l, "l");
  require_positive(spec.p, "p");
  require_positive(n, "n");
  Rng rng(spec.seed);
  // Equality rows first, then inequality rows.
  Tensor3 a = gaussian_tensor(m, spec.l, n, rng);
  Tensor3 x = gaussian_tensor(spec.l, spec.p, n, rng);
  Tensor3 b = n == 1 ? tprod_naive(a, x) : tprod_fft(a, x);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < spec.p; ++c)
      for (std::size_t i = spec.m_eq; i < m; ++i) b(i, c, k) += std::abs(rng.normal());
  auto part = ConstraintPartition::equality_first(spec.m_eq, spec.m_ineq);
  std::optional<RowPaving> paving;
  if (with_paving) {
    require_positive(spec.block_size, "block size");
    paving = RowPaving::consecutive(part, spec.block_size);
  }
  FeasibilityProblem problem(std::move(a), std::move(b), std::move(part), std::move(paving));
  return {std::move(problem), std::move(x)};
}

}  // namespace

GeneratedProblem gen_matrix_gaussian(const GenSpec& spec) {
  return gaussian_system(spec, 1, true);
}

GeneratedProblem gen_tensor_gaussian(const GenSpec& spec) {
  return gaussian_system(spec, spec.n, spec.n == 1);
}

GeneratedProblem gen_classification(const GenSpec& spec) {
  const std::size_t m = spec.m_ineq;
  const std::size_t d = spec.l;
  require_positive(m, "data point count");
  require_positive(d, "feature count");
  require_positive(spec.block_size, "block size");
  constexpr double kMinMargin = 1e-4;
  constexpr double kOffset = 1e-5;
  Rng rng(spec.seed);
  std::vector<double> w(d);
  for (double& v : w) v = rng.normal();

  Tensor3 a(m, d, 1);
  std::vector<double> row(d);
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    double dot = 0.0;
    do {
      dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        row[j] = rng.normal();
        dot += row[j] * w[j];
      }
    } while (std::abs(dot) < kMinMargin);
    const double label = dot > 0.0 ? 1.0 : -1.0;
    for (std::size_t j = 0; j < d; ++j) a(i, j, 0) = -label * row[j];
    min_margin = std::min(min_margin, std::abs(dot));
  }
  Tensor3 b = Tensor3::constant(m, 1, 1, -kOffset);
  Tensor3 witness(d, 1, 1);
  const double scale = 1.0 / min_margin;
  for (std::size_t j = 0; j < d; ++j) witness(j, 0, 0) = scale * w[j];
  auto part = ConstraintPartition::all_inequality(m);
  auto paving = RowPaving::consecutive(part, spec.block_size);
  return {FeasibilityProblem(std::move(a), std::move(b), std::move(part), std::move(paving)),
          std::move(witness)};
}

GeneratedProblem gen_eq_bound(const GenSpec& spec) {
  const std::size_t m = spec.m_eq;
  require_positive(m, "row count");
  require_positive(spec.l, "l");
  require_positive(spec.p, "p");
  require_positive(spec.n, "n");
  Rng rng(spec.seed);
  Tensor3 a = gaussian_tensor(m, spec.l, spec.n, rng);
  Tensor3 x = gaussian_tensor(spec.l, spec.p, spec.n, rng);
  Tensor3 b = spec.n == 1 ? tprod_naive(a, x) : tprod_fft(a, x);
  Tensor3 upper = x;
  for (double& v : upper.data()) v += std::abs(rng.normal());
  FeasibilityProblem problem(std::move(a), std::move(b), ConstraintPartition::all_equality(m),
                             std::nullopt, std::move(upper));
  return {std::move(problem), std::move(x)};
}

GeneratedProblem gen_deblur(const GenSpec& spec) {
  require_positive(spec.l, "image height");
  require_positive(spec.p, "frame count");
  require_positive(spec.n, "image width");
  Tensor3 truth = gen_phantom_stack(spec.l, spec.n, spec.p);
  Tensor3 op = build_blur_operator(spec.l, spec.n,
                                   gaussian_kernel_1d(spec.kernel_size, spec.kernel_sigma));
  Tensor3 rhs = tprod_fft(op, truth);
  return {gen_deblur_problem(op, rhs, spec.noisy, spec.epsilon, spec.noise_amplitude,
                             spec.seed),
          std::move(truth)};
}

GeneratedProblem generate(const GenSpec& spec) {
  switch (spec.family) {
    case Family::MatrixGaussian: return gen_matrix_gaussian(spec);
    case Family::Classification: return gen_classification(spec);
    case Family::TensorGaussian: return gen_tensor_gaussian(spec);
    case Family::EqBound: return gen_eq_bound(spec);
    case Family::Deblur: return gen_deblur(spec);
  }
  throw InvalidProblem("unknown family");
}

std::vector<double> gaussian_kernel_1d(std::size_t size, double sigma) {
  if (size % 2 == 0) throw InvalidProblem("kernel size must be odd");
  if (!(sigma > 0.0)) throw InvalidProblem("kernel sigma must be positive");
  const auto h = static_cast<std::ptrdiff_t>(size / 2);
  std::vector<double> g(size);
  double sum = 0.0;
  for (std::ptrdiff_t d = -h; d <= h; ++d) {
    const double v = std::exp(-static_cast<double>(d * d) / (2.0 * sigma * sigma));
    g[static_cast<std::size_t>(d + h)] = v;
    sum += v;
  }
  for (double& v : g) v /= sum;
  return g;
}

Tensor3 build_blur_operator(std::size_t height, std::size_t width,
                            const std::vector<double>& kernel) {
  require_positive(height, "image height");
  require_positive(width, "image width");
  if (kernel.empty() || kernel.size() % 2 == 0) {
    throw InvalidProblem("blur kernel length must be odd");
  }
  if (kernel.size() > std::min(height, width)) {
    throw InvalidProblem("blur kernel of length " + std::to_string(kernel.size()) +
                         " does not fit a " + std::to_string(height) + "x" +
                         std::to_string(width) + " image");
  }
  const auto h = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  const auto n = static_cast<std::ptrdiff_t>(width);
  std::vector<double> wrap(width, 0.0);
  for (std::ptrdiff_t d = -h; d <= h; ++d) {
    wrap[static_cast<std::size_t>(((d % n) + n) % n)] += kernel[static_cast<std::size_t>(d + h)];
  }
  Tensor3 op(height, height, width);
  for (std::size_t k = 0; k < width; ++k) {
    if (wrap[k] == 0.0) continue;
    for (std::size_t c = 0; c < height; ++c) {
      for (std::ptrdiff_t d = -h; d <= h; ++d) {
        const auto r = static_cast<std::ptrdiff_t>(c) + d;
        if (r < 0 || r >= static_cast<std::ptrdiff_t>(height)) continue;
        op(static_cast<std::size_t>(r), c, k) = wrap[k] * kernel[static_cast<std::size_t>(d + h)];
      }
    }
  }
  return op;
}

FeasibilityProblem gen_deblur_problem(const Tensor3& op, const Tensor3& clean_rhs,
                                      bool noisy, double epsilon, double noise_amplitude,
                                      std::uint64_t seed) {
  const std::size_t l = op.cols();
  const std::size_t p = clean_rhs.cols();
  const std::size_t n = op.tubes();
  if (!noisy) {
    return FeasibilityProblem(op, clean_rhs, ConstraintPartition::all_equality(op.rows()),
                              std::nullopt, std::nullopt, Tensor3(l, p, n));
  }
  if (!(epsilon > 0.0)) throw InvalidProblem("noise tolerance epsilon must be positive");
  if (noise_amplitude < 0.0) throw InvalidProblem("noise amplitude must be nonnegative");
  Rng rng(seed);
  Tensor3 noisy_rhs = clean_rhs;
  for (double& v : noisy_rhs.data()) v += rng.uniform(-noise_amplitude, noise_amplitude);

  Tensor3 upper = noisy_rhs;
  for (double& v : upper.data()) v += epsilon;
  Tensor3 lower = noisy_rhs;
  for (double& v : lower.data()) v = -(v - epsilon);
  Tensor3 neg_op = -1.0 * op;
  Tensor3 neg_id = -1.0 * Tensor3::identity(l, n);
  const Tensor3 ops[] = {op, neg_op, neg_id};
  const Tensor3 rhs[] = {upper, lower, Tensor3(l, p, n)};
  const std::size_t m = 2 * op.rows() + l;
  return FeasibilityProblem(stack_rows(ops), stack_rows(rhs),
                            ConstraintPartition::all_inequality(m));
}

Tensor3 gen_phantom_stack(std::size_t height, std::size_t width, std::size_t frames) {
  require_positive(height, "image height");
  require_positive(width, "image width");
  require_positive(frames, "frame count");
  Tensor3 stack(height, frames, width);
  auto inside = [](double x, double y, double cx, double cy, double ax, double ay) {
    const double u = (x - cx) / ax;
    const double v = (y - cy) / ay;
    return u * u + v * v <= 1.0;
  };
  for (std::size_t f = 0; f < frames; ++f) {
    const double s = frames > 1 ? static_cast<double>(f) / static_cast<double>(frames - 1) : 0.0;
    for (std::size_t r = 0; r < height; ++r) {
      const double y = 2.0 * (static_cast<double>(r) + 0.5) / static_cast<double>(height) - 1.0;
      for (std::size_t k = 0; k < width; ++k) {
        const double x = 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(width) - 1.0;
        double v = 0.0;
        if (inside(x, y, 0.0, 0.0, 0.75, 0.9)) v = 180.0;
        if (inside(x, y, 0.0, 0.02, 0.66, 0.8)) v = 90.0;
        if (inside(x, y, -0.3, -0.1, 0.12 + 0.08 * s, 0.3)) v = 220.0 - 60.0 * s;
        if (inside(x, y, 0.3, -0.1, 0.2 - 0.08 * s, 0.3)) v = 40.0 + 60.0 * s;
        if (std::abs(x) <= 0.2 && y >= 0.35 && y <= 0.55) v = 140.0 + 80.0 * s;
        if (inside(x, y, 0.0, -0.55 + 0.3 * s, 0.1, 0.1)) v = 255.0;
        stack(r, f, k) = v;
      }
    }
  }
  return stack;
}

}  // namespace tkz
