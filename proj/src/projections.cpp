#include "rplsh/projections.hpp"

#include <algorithm>
#include <cmath>

#include "rplsh/errors.hpp"
#include "rplsh/rng.hpp"

namespace rplsh {
namespace {

// Inputs whose squared norm is already this close to 1 are returned unchanged, which
// makes normalize() exactly idempotent.
constexpr double kUnitSlack = 1e-12;

// Stream tag separating offset draws from direction draws.
constexpr std::uint64_t kOffsetStream = 0x6F66667365747321ULL;

}  // namespace

DataVector normalize(std::span<const double> values, PointId id) {
  if (values.empty()) throw InvalidParams("cannot normalize an empty vector");
  double max_abs = 0.0;
  for (double x : values) {
    if (!std::isfinite(x)) throw InvalidParams("vector has a non-finite entry");
    max_abs = std::max(max_abs, std::abs(x));
  }
  if (max_abs == 0.0) throw ZeroVector();

  double sumsq = 0.0;
  for (double x : values) sumsq += x * x;
  DataVector out{id, std::vector<double>(values.begin(), values.end())};
  if (std::abs(sumsq - 1.0) <= kUnitSlack) return out;

  double scaled = 0.0;
  for (double x : values) {
    const double r = x / max_abs;
    scaled += r * r;
  }
  const double norm = max_abs * std::sqrt(scaled);
  for (double& x : out.values) x /= norm;
  return out;
}

DataVector normalize(const DataVector& v) { return normalize(v.values, v.id); }

void Dataset::add(PointId id, std::span<const double> values) {
  if (ids_.empty() && dim_ == 0) dim_ = values.size();
  if (values.size() != dim_) throw DimensionMismatch(dim_, values.size());
  if (dim_ == 0) throw InvalidParams("vectors must have dimension >= 1");
  ids_.push_back(id);
  values_.insert(values_.end(), values.begin(), values.end());
}

void Dataset::reserve(std::size_t rows) {
  ids_.reserve(rows);
  values_.reserve(rows * dim_);
}

DataVector Dataset::vector(std::size_t r) const {
  auto v = row(r);
  return {ids_[r], std::vector<double>(v.begin(), v.end())};
}

Dataset Dataset::normalized() const {
  Dataset out(dim_);
  out.reserve(size());
  for (std::size_t r = 0; r < size(); ++r) out.add(normalize(row(r), ids_[r]));
  return out;
}

ProjectionEnsemble generate_ensemble(std::size_t dim, std::size_t hashes_per_table,
                                     std::size_t num_tables, Scheme scheme, double bin_width,
                                     std::uint64_t seed) {
  if (dim == 0 || hashes_per_table == 0 || num_tables == 0)
    throw InvalidParams("ensemble needs D, K, L >= 1");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw InvalidParams("bin width must be a positive finite number");

  ProjectionEnsemble e;
  e.dim_in_ = dim;
  e.hashes_per_table_ = hashes_per_table;
  e.num_tables_ = num_tables;
  e.scheme_ = scheme;
  e.bin_width_ = bin_width;
  e.seed_ = seed;

  const std::size_t k = hashes_per_table * num_tables;
  e.entries_.resize(dim * k);
  for (std::size_t j = 0; j < k; ++j) {
    Rng rng(derive_seed(seed, j));
    for (std::size_t i = 0; i < dim; ++i) e.entries_[i * k + j] = rng.normal();
  }

  if (scheme == Scheme::uq_offset) {
    const std::uint64_t offset_seed = derive_seed(seed, kOffsetStream);
    e.offsets_.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      Rng rng(derive_seed(offset_seed, j));
      double q = rng.uniform() * bin_width;
      if (q >= bin_width) q = std::nextafter(bin_width, 0.0);
      e.offsets_[j] = q;
    }
  }
  return e;
}

void project_into(std::span<const double> v, const ProjectionEnsemble& e, std::span<double> out) {
  if (v.size() != e.dim_in()) throw DimensionMismatch(e.dim_in(), v.size());
  const std::size_t k = e.num_directions();
  if (out.size() != k) throw DimensionMismatch(k, out.size());
  std::fill(out.begin(), out.end(), 0.0);
  const double* r = e.entries().data();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double vi = v[i];
    const double* row = r + i * k;
    for (std::size_t j = 0; j < k; ++j) out[j] += vi * row[j];
  }
}

ProjectedPoint project(const DataVector& v, const ProjectionEnsemble& e) {
  ProjectedPoint p{v.id, std::vector<double>(e.num_directions())};
  project_into(v.values, e, p.coords);
  return p;
}

std::vector<double> project_all(const Dataset& data, const ProjectionEnsemble& e) {
  if (!data.empty() && data.dim() != e.dim_in()) throw DimensionMismatch(e.dim_in(), data.dim());
  const std::size_t k = e.num_directions();
  std::vector<double> out(data.size() * k);
  for (std::size_t r = 0; r < data.size(); ++r)
    project_into(data.row(r), e, std::span<double>(out.data() + r * k, k));
  return out;
}

std::vector<CorrelatedPair> sample_correlated_pair(double rho, std::size_t n, std::uint64_t seed) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw InvalidParams("correlation must lie in [-1, 1]");
  if (n == 0) throw InvalidParams("need at least one pair");
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  Rng rng(seed);
  std::vector<CorrelatedPair> pairs(n);
  for (auto& p : pairs) {
    p.x = rng.normal();
    const double z = rng.normal();
    p.y = rho * p.x + s * z;
  }
  return pairs;
}

}  // namespace rplsh
