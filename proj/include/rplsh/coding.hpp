#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rplsh/projections.hpp"
#include "rplsh/scheme.hpp"

namespace rplsh {

using Code = std::int64_t;

struct CodingParams {
  Scheme scheme = Scheme::uq;
  double w = 1.0;

  /// Throws InvalidParams unless w is positive and finite.
  void validate() const;
};

/// K quantized coordinates of one point for one table.
struct HashCode {
  std::vector<Code> codes;

  friend bool operator==(const HashCode&, const HashCode&) = default;
};

/// Mathematical floor of x / w (toward -infinity). A value exactly on a bin boundary
/// belongs to the upper bin. Throws InvalidParams for non-finite x, w <= 0, or a quotient
/// outside the 64-bit code range.
Code code_uq(double x, double w);

/// code_uq(x + q, w). Throws InvalidParams unless 0 <= q < w.
Code code_uq_offset(double x, double w, double q);

/// Codes for table `table`: quantizes coords[table*K .. table*K + K) of a point projected by
/// `e`, using the ensemble's offsets for Scheme::uq_offset. Throws IndexOutOfRange.
HashCode code_point(const ProjectedPoint& p, const ProjectionEnsemble& e, const CodingParams& params,
                    std::size_t table);

}  // namespace rplsh
