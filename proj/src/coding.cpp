#include "rplsh/coding.hpp"

#include <cmath>
#include <string>

#include "rplsh/errors.hpp"

namespace rplsh {
namespace {

constexpr double kCodeLimit = 0x1.0p62;

}  // namespace

void CodingParams::validate() const {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidParams("bin width must be positive and finite");
}

Code code_uq(double x, double w) {
  if (!std::isfinite(x)) throw InvalidParams("cannot quantize a non-finite value");
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidParams("bin width must be positive and finite");
  const double bin = std::floor(x / w);
  if (std::abs(bin) >= kCodeLimit) throw InvalidParams("quantized value overflows the code range");
  return static_cast<Code>(bin);
}

Code code_uq_offset(double x, double w, double q) {
  if (!(q >= 0.0 && q < w)) throw InvalidParams("offset must lie in [0, w)");
  return code_uq(x + q, w);
}

HashCode code_point(const ProjectedPoint& p, const ProjectionEnsemble& e, const CodingParams& params,
                    std::size_t table) {
  if (table >= e.num_tables())
    throw IndexOutOfRange("table " + std::to_string(table) + " out of range (L = " +
                          std::to_string(e.num_tables()) + ")");
  if (p.coords.size() != e.num_directions())
    throw DimensionMismatch(e.num_directions(), p.coords.size());
  params.validate();
  const bool offset = params.scheme == Scheme::uq_offset;
  if (offset && !e.has_offsets()) throw InvalidParams("ensemble carries no offsets for uq-offset");

  const std::size_t k = e.hashes_per_table();
  HashCode h;
  h.codes.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = table * k + i;
    h.codes[i] = offset ? code_uq_offset(p.coords[j], params.w, e.offsets()[j])
                        : code_uq(p.coords[j], params.w);
  }
  return h;
}

}  // namespace rplsh
