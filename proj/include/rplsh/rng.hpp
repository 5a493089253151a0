#pragma once

#include <cstdint>
#include <random>

namespace rplsh {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of sub-stream `stream` under `master`.
///
/// Every generator in the library is keyed this way: a projection direction j uses
/// derive_seed(seed, j), a Monte Carlo shard s uses derive_seed(seed, s), and so on.
/// Nested derivation (derive_seed(derive_seed(m, tag), j)) separates independent families.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Reproducible random source: mt19937_64 plus explicit uniform and Gaussian transforms
/// so that draws do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rplsh
