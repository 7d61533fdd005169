#include "tkz/error.hpp"
#include "tkz/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tkz;

namespace {

std::vector<TraceRow> rows_from(const std::vector<double>& r, std::size_t stride = 1) {
  std::vector<TraceRow> out;
  for (std::size_t k = 0; k < r.size(); ++k) out.push_back({k * stride, 0.0, r[k]});
  return out;
}

}  // namespace

TEST(FitRate, HalvingSequence) {
  const auto rows = rows_from({1.0, 0.5, 0.25, 0.125});
  const RateFit f = fit_rate(rows, {0.0, 2});
  EXPECT_NEAR(f.slope, std::log(0.5), 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  EXPECT_EQ(f.points, 4u);
  EXPECT_FALSE(f.hit_zero);
}

TEST(FitRate, GeometricWithStrideAndBurnIn) {
  std::vector<double> r;
  for (int k = 0; k < 20; ++k) r.push_back(3.0 * std::pow(0.9, 10 * k));
  const RateFit f = fit_rate(rows_from(r, 10));
  EXPECT_NEAR(f.slope, std::log(0.9), 1e-12);
  EXPECT_EQ(f.points, 16u);
}

TEST(FitRate, ConstantResidual) {
  const RateFit f = fit_rate(rows_from(std::vector<double>(12, 2.0)));
  EXPECT_EQ(f.slope, 0.0);
  EXPECT_EQ(f.r_squared, 1.0);
}

TEST(FitRate, ZeroResidualUsesPositivePrefix) {
  std::vector<double> r;
  for (int k = 0; k < 12; ++k) r.push_back(std::pow(0.5, k));
  r.push_back(0.0);
  r.push_back(0.0);
  const RateFit f = fit_rate(rows_from(r), {0.0, 10});
  EXPECT_TRUE(f.hit_zero);
  EXPECT_EQ(f.points, 12u);
  EXPECT_NEAR(f.slope, std::log(0.5), 1e-12);
}

TEST(FitRate, TooFewPoints) {
  EXPECT_THROW(fit_rate(rows_from({1.0, 0.5, 0.25})), InvalidProblem);
  EXPECT_THROW(fit_rate(rows_from({0.0, 0.0}), {0.0, 2}), InvalidProblem);
  EXPECT_THROW(fit_rate(rows_from(std::vector<double>(20, 1.0)), {1.0, 2}), InvalidProblem);
}

TEST(Psnr, Cases) {
  const Tensor3 a = Tensor3::constant(4, 2, 3, 100.0);
  EXPECT_TRUE(std::isinf(psnr(a, a)));
  EXPECT_NEAR(psnr(a, a + Tensor3::constant(4, 2, 3, 1.0)), 20.0 * std::log10(255.0), 1e-12);
  EXPECT_NEAR(psnr(a, a + Tensor3::constant(4, 2, 3, 1.0)), 48.13, 0.01);
  EXPECT_THROW(psnr(a, Tensor3(4, 2, 2)), DimensionError);
  EXPECT_THROW(psnr(a, a, 0.0), InvalidProblem);
}
