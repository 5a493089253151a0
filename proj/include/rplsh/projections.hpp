#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rplsh/scheme.hpp"

namespace rplsh {

using PointId = std::int64_t;

/// An identified dense vector. Vectors produced by normalize() have unit l2 norm.
struct DataVector {
  PointId id = 0;
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
};

/// Scales `values` to unit l2 norm. Throws ZeroVector if every entry is zero and
/// InvalidParams on empty or non-finite input.
DataVector normalize(std::span<const double> values, PointId id = 0);
DataVector normalize(const DataVector& v);

/// Row-major store of same-dimension vectors with their ids. Indexes keep row numbers
/// into a Dataset rather than copies of the vectors.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t dim) : dim_(dim) {}

  /// Appends a vector. The first vector fixes the dimension of an empty default-constructed
  /// store; afterwards a different dimension throws DimensionMismatch.
  void add(PointId id, std::span<const double> values);
  void add(const DataVector& v) { add(v.id, v.values); }
  void reserve(std::size_t rows);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return ids_.empty(); }

  PointId id(std::size_t row) const { return ids_[row]; }
  std::span<const PointId> ids() const { return ids_; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * dim_, dim_};
  }
  std::span<const double> values() const { return values_; }
  DataVector vector(std::size_t row) const;

  /// Copy with every row normalized (ids kept).
  Dataset normalized() const;

 private:
  std::size_t dim_ = 0;
  std::vector<PointId> ids_;
  std::vector<double> values_;
};

/// Seeded D x (K*L) Gaussian matrix, partitioned into L groups of K hash directions.
///
/// Column j = table * K + i holds direction i of table `table`. Column j is drawn from its
/// own stream derive_seed(seed, j), so the first K*L' columns of an ensemble with L > L'
/// tables are bit-identical to the ensemble generated with L' tables. The offset of column
/// j is w * u_j with u_j ~ uniform[0, 1) drawn from a separate per-column stream, so the
/// same seed yields the same offset fractions at every bin width.
class ProjectionEnsemble {
 public:
  std::size_t dim_in() const { return dim_in_; }
  std::size_t num_tables() const { return num_tables_; }
  std::size_t hashes_per_table() const { return hashes_per_table_; }
  std::size_t num_directions() const { return num_tables_ * hashes_per_table_; }
  Scheme scheme() const { return scheme_; }
  double bin_width() const { return bin_width_; }
  std::uint64_t seed() const { return seed_; }

  /// Row-major D x (K*L) matrix.
  std::span<const double> entries() const { return entries_; }
  double entry(std::size_t row, std::size_t col) const {
    return entries_[row * num_directions() + col];
  }
  /// Empty for Scheme::uq; K*L values in [0, w) for Scheme::uq_offset.
  std::span<const double> offsets() const { return offsets_; }
  bool has_offsets() const { return !offsets_.empty(); }

 private:
  friend ProjectionEnsemble generate_ensemble(std::size_t, std::size_t, std::size_t, Scheme,
                                              double, std::uint64_t);

  std::size_t dim_in_ = 0;
  std::size_t num_tables_ = 0;
  std::size_t hashes_per_table_ = 0;
  Scheme scheme_ = Scheme::uq;
  double bin_width_ = 1.0;
  std::uint64_t seed_ = 0;
  std::vector<double> entries_;
  std::vector<double> offsets_;
};

/// Throws InvalidParams on zero D, K, L or non-positive w.
ProjectionEnsemble generate_ensemble(std::size_t dim, std::size_t hashes_per_table,
                                     std::size_t num_tables, Scheme scheme, double bin_width,
                                     std::uint64_t seed);

struct ProjectedPoint {
  PointId id = 0;
  std::vector<double> coords;
};

/// coords[j] = sum_i v[i] * entries[i][j]. Throws DimensionMismatch.
ProjectedPoint project(const DataVector& v, const ProjectionEnsemble& e);

/// Writes the K*L projections of `v` into `out` (no allocation).
void project_into(std::span<const double> v, const ProjectionEnsemble& e, std::span<double> out);

/// Projects every row of `data`; result is row-major size() x (K*L).
std::vector<double> project_all(const Dataset& data, const ProjectionEnsemble& e);

struct CorrelatedPair {
  double x = 0.0;
  double y = 0.0;
};

/// n draws of (x, y) standard bivariate normal with correlation rho:
/// x ~ N(0,1), y = rho * x + sqrt(1 - rho^2) * z. This is the joint law of one projected
/// coordinate of two unit vectors with inner product rho.
std::vector<CorrelatedPair> sample_correlated_pair(double rho, std::size_t n, std::uint64_t seed);

}  // namespace rplsh
