#include "tkz/error.hpp"
#include "tkz/random.hpp"
#include "tkz/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace tkz;

TEST(Rng, DeterministicAndInRange) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    differs = differs || u != c.uniform();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, NormalMoments) {
  Rng rng(7);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

TEST(Rng, MixSeedSpreads) {
  EXPECT_NE(mix_seed(0), mix_seed(1));
  EXPECT_EQ(mix_seed(12345), mix_seed(12345));
}

TEST(Sampling, WeightsValidated) {
  const std::vector<double> empty;
  EXPECT_THROW(SamplingWeights{empty}, InvalidProblem);
  const std::vector<double> zero{1.0, 0.0};
  EXPECT_THROW(SamplingWeights{zero}, InvalidProblem);
  const std::vector<double> inf{1.0, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(SamplingWeights{inf}, InvalidProblem);
  const std::vector<double> w{1.0, 2.0, 5.0};
  const SamplingWeights s(w);
  EXPECT_EQ(s.cdf().back(), 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) total += s.probability(i);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(s.probability(2), 5.0 / 8.0, 1e-12);
}

TEST(Sampling, SingleRowAlwaysChosen) {
  const std::vector<double> w{3.0};
  const SamplingWeights s(w);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_index(s, rng), 0u);
}

TEST(Sampling, NormSquaredFrequencies) {
  // Row norms 1 and sqrt(3): probabilities 1/4 and 3/4.
  const std::vector<double> w{1.0, 3.0};
  const SamplingWeights s(w);
  Rng rng(2);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += sample_index(s, rng) == 1 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(hits) / n, 0.75, 0.01);
}

TEST(Sampling, EqualWeightsUniformWithinThreeSigma) {
  const std::vector<double> w(5, 2.0);
  const SamplingWeights s(w);
  Rng rng(3);
  const int n = 100000;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < n; ++i) ++counts[sample_index(s, rng)];
  const double sigma = std::sqrt(n * 0.2 * 0.8);
  for (int c : counts) EXPECT_LE(std::abs(c - n * 0.2), 3 * sigma);
}

TEST(Sampling, OneUniformPerDraw) {
  const std::vector<double> w{1.0, 1.0, 2.0};
  const SamplingWeights s(w);
  Rng a(9), b(9);
  for (int i = 0; i < 50; ++i) {
    sample_index(s, a);
    b.uniform();
  }
  EXPECT_EQ(a.next_u64(), b.next_u64());
}
