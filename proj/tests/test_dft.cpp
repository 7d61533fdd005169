#include "tkz/dft.hpp"
#include "tkz/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tkz;
using cd = std::complex<double>;

namespace {

// O(n^2) reference: y_f = sum_t x_t exp(-2 pi i f t / n).
std::vector<cd> direct_dft(const std::vector<cd>& x) {
  const std::size_t n = x.size();
  std::vector<cd> y(n);
  for (std::size_t f = 0; f < n; ++f) {
    cd acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((f * t) % n) /
                         static_cast<double>(n);
      acc += x[t] * cd{std::cos(ang), std::sin(ang)};
    }
    y[f] = acc;
  }
  return y;
}

}  // namespace

class DftLength : public ::testing::TestWithParam<std::size_t> {};

TEST_P(DftLength, MatchesDirectDftAndRoundTrips) {
  const std::size_t n = GetParam();
  Rng rng(n);
  std::vector<cd> x(n);
  for (auto& v : x) v = {rng.normal(), rng.normal()};
  const std::vector<cd> ref = direct_dft(x);
  std::vector<cd> y = x;
  TubeDft dft(n);
  dft.forward(y);
  double scale = 0.0;
  for (const auto& v : ref) scale = std::max(scale, std::abs(v));
  for (std::size_t f = 0; f < n; ++f) EXPECT_NEAR(std::abs(y[f] - ref[f]), 0.0, 1e-12 * (1 + scale));
  dft.inverse(y);
  for (std::size_t t = 0; t < n; ++t) EXPECT_NEAR(std::abs(y[t] - x[t]), 0.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Lengths, DftLength,
                         ::testing::Values(1, 2, 3, 5, 7, 8, 10, 12, 16, 31, 64, 65, 100, 127,
                                           128, 243, 300));

TEST(Dft, ConstantTubeConcentratesAtZeroFrequency) {
  for (std::size_t n : {1u, 4u, 10u, 97u}) {
    std::vector<cd> x(n, cd{2.5, 0.0});
    TubeDft(n).forward(x);
    EXPECT_NEAR(x[0].real(), 2.5 * static_cast<double>(n), 1e-12 * static_cast<double>(n));
    for (std::size_t f = 1; f < n; ++f) EXPECT_NEAR(std::abs(x[f]), 0.0, 1e-11);
  }
}

TEST(Dft, LengthOneIsIdentity) {
  std::vector<cd> x{cd{-3.25, 0.5}};
  TubeDft(1).forward(x);
  EXPECT_EQ(x[0], (cd{-3.25, 0.5}));
}

TEST(Dft, WrongTubeLengthRejected) {
  TubeDft dft(4);
  std::vector<cd> x(5);
  EXPECT_ANY_THROW(dft.forward(x));
  EXPECT_ANY_THROW(TubeDft(0));
}
