#pragma once

#include <cstdint>
#include <random>

namespace tkz {

/// Seedable generator with a platform-independent output stream.
///
/// Wraps std::mt19937_64 (whose sequence is fixed by the standard) and derives
/// uniform and normal variates in-tree, because the std distributions are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer; used to derive independent seeds from one master seed.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace tkz
