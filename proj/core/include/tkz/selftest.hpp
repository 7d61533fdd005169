#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tkz {

struct SelftestCase {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Randomized oracle checks: FFT vs block-circulant t-product, norm and
/// adjoint identities, bcirc transpose, product-norm bound, step-bound range,
/// matrix-form equivalence of row updates, and the TRK-LB bound invariant.
std::vector<SelftestCase> run_selftest(std::uint64_t seed);

}  // namespace tkz
