#pragma once

#include "tkz/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tkz {

/// Categorical distribution p_i = w_i / sum(w), stored as a cumulative table.
class SamplingWeights {
 public:
  /// Weights must be finite and strictly positive.
  explicit SamplingWeights(std::span<const double> weights);

  std::size_t size() const noexcept { return cdf_.size(); }
  double probability(std::size_t i) const;
  std::span<const double> cdf() const noexcept { return cdf_; }

 private:
  std::vector<double> cdf_;  // normalized, last entry exactly 1
};

/// Inverse-CDF draw using exactly one uniform variate from `rng`.
std::size_t sample_index(const SamplingWeights& w, Rng& rng);

}  // namespace tkz
