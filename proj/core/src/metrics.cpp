#include "tkz/metrics.hpp"

#include "tkz/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tkz {

RateFit fit_rate(std::span<const TraceRow> rows, const FitOptions& options) {
  if (!(options.burn_in >= 0.0 && options.burn_in < 1.0)) {
    throw InvalidProblem("burn-in fraction must lie in [0, 1)");
  }
  RateFit fit;
  std::size_t end = 0;
  while (end < rows.size() && rows[end].residual > 0.0) ++end;
  fit.hit_zero = end < rows.size();
  const auto skip = static_cast<std::size_t>(std::floor(options.burn_in * static_cast<double>(end)));
  const std::size_t count = end - skip;
  if (count < std::max<std::size_t>(options.min_points, 2)) {
    throw InvalidProblem("rate fit needs at least " +
                         std::to_string(std::max<std::size_t>(options.min_points, 2)) +
                         " positive points after burn-in, have " + std::to_string(count));
  }
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = skip; i < end; ++i) {
    sx += static_cast<double>(rows[i].iteration);
    sy += std::log(rows[i].residual);
  }
  const double mx = sx / static_cast<double>(count);
  const double my = sy / static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = skip; i < end; ++i) {
    const double dx = static_cast<double>(rows[i].iteration) - mx;
    const double dy = std::log(rows[i].residual) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = skip; i < end; ++i) {
    const double e = std::log(rows[i].residual) - fit.intercept -
                     fit.slope * static_cast<double>(rows[i].iteration);
    ss_res += e * e;
  }
  // A constant series is fitted exactly.
  fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
  fit.points = count;
  return fit;
}

double psnr(const Tensor3& reference, const Tensor3& test, double peak) {
  if (!reference.same_shape(test)) throw DimensionError("psnr: tensor shapes differ");
  if (!(peak > 0.0)) throw InvalidProblem("psnr: peak must be positive");
  double sq = 0.0;
  const auto a = reference.data();
  const auto b = test.data();
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  const double mse = sq / static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace tkz
