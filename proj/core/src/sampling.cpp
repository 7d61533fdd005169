#include "tkz/sampling.hpp"

#include "tkz/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tkz {

SamplingWeights::SamplingWeights(std::span<const double> weights) {
  if (weights.empty()) throw InvalidProblem("sampling weights: empty");
  cdf_.resize(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidProblem("sampling weights: weight " + std::to_string(i) +
                           " is not positive and finite");
    }
    total += w;
    cdf_[i] = total;
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double SamplingWeights::probability(std::size_t i) const {
  return i == 0 ? cdf_.at(0) : cdf_.at(i) - cdf_.at(i - 1);
}

std::size_t sample_index(const SamplingWeights& w, Rng& rng) {
  const double u = rng.uniform();
  const auto cdf = w.cdf();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace tkz
