#pragma once

#include "tkz/random.hpp"
#include "tkz/tensor3.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace tkz::test {

inline Tensor3 random_tensor(std::size_t m, std::size_t l, std::size_t n, Rng& rng) {
  Tensor3 t(m, l, n);
  for (double& v : t.data()) v = rng.normal();
  return t;
}

inline std::size_t random_dim(Rng& rng, std::size_t hi) {
  return 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi));
}

inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  double d = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) d = std::max(d, std::abs(a.data()[q] - b.data()[q]));
  return d;
}

}  // namespace tkz::test
