#pragma once

#include "tkz/solvers.hpp"
#include "tkz/tensor3.hpp"

#include <cstddef>
#include <span>

namespace tkz {

struct FitOptions {
  /// Fraction of the (positive) logged points dropped from the front.
  double burn_in = 0.2;
  std::size_t min_points = 10;
};

struct RateFit {
  /// d log(residual) / d iteration.
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  /// The residual reached exactly 0; only the positive prefix was fitted.
  bool hit_zero = false;
};

/// Least squares fit of log(residual) against iteration. Throws InvalidProblem
/// when fewer than options.min_points points remain.
RateFit fit_rate(std::span<const TraceRow> rows, const FitOptions& options = {});

/// 10 log10(peak^2 / MSE); +infinity when the tensors are identical.
double psnr(const Tensor3& reference, const Tensor3& test, double peak = 255.0);

}  // namespace tkz
