#pragma once

#include <cstddef>
#include <cstdint>

namespace rplsh::synthetic_defaults {

// Default synthetic benchmark.
inline constexpr std::size_t kPoints = 20000;
inline constexpr std::size_t kQueries = 500;
inline constexpr std::size_t kDim = 64;
inline constexpr std::size_t kTopT = 10;
// With these values the median correlation between a query and its 10th nearest
// neighbor is 0.8997 (seed 1).
inline constexpr std::size_t kClusters = 200;
inline constexpr double kSpread = 0.38;
inline constexpr std::uint64_t kSeed = 1;

}  // namespace rplsh::synthetic_defaults
