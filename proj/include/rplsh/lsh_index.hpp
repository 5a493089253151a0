#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "rplsh/coding.hpp"
#include "rplsh/projections.hpp"

namespace rplsh {

struct LshConfig {
  std::size_t K = 1;  ///< hash functions concatenated per table
  std::size_t L = 1;  ///< number of tables
  CodingParams params;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Data projected once onto the first `K * max_tables` directions of the ensemble with the
/// given seed. Indexes with any L <= max_tables (same K and seed) can be built from it
/// without projecting again; their ensembles are the column prefix of this one.
struct ProjectedData {
  std::size_t dim = 0;
  std::size_t K = 0;
  std::size_t max_tables = 0;
  std::uint64_t seed = 0;
  std::vector<PointId> ids;
  std::vector<double> coords;  ///< row-major ids.size() x (K * max_tables)

  std::size_t stride() const { return K * max_tables; }
  std::span<const double> row(std::size_t r) const { return {coords.data() + r * stride(), stride()}; }
};

ProjectedData project_dataset(const Dataset& data, std::size_t K, std::size_t max_tables, std::uint64_t seed);

/// Standard (K, L)-LSH: L tables, each keyed by the exact K-tuple of codes from its own K hash
/// functions. A query returns the union of the buckets its codes select.
///
/// Buckets hold row numbers; ids are looked up in one shared id array. The index is
/// immutable after construction and safe to query concurrently.
class LshIndex {
 public:
  /// Throws EmptyDataset, DimensionMismatch, or InvalidParams for vectors that are not unit norm.
  static LshIndex build(const Dataset& data, const LshConfig& config);

  /// Same tables as build() on the dataset `projected` came from. Throws InvalidParams when
  /// K or the seed differ from the projection, or L exceeds its table count.
  static LshIndex build(const ProjectedData& projected, const LshConfig& config);

  const LshConfig& config() const { return config_; }
  const ProjectionEnsemble& ensemble() const { return ensemble_; }
  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return ensemble_.dim_in(); }
  std::span<const PointId> ids() const { return ids_; }

  /// Ids in the union of matching buckets, ascending. Throws DimensionMismatch.
  std::vector<PointId> query(std::span<const double> q) const;
  std::vector<PointId> query(const DataVector& q) const { return query(std::span<const double>(q.values)); }

  /// |query(q)| / size().
  double fraction_retrieved(std::span<const double> q) const;
  double fraction_retrieved(const DataVector& q) const { return fraction_retrieved(std::span<const double>(q.values)); }

  /// Codes of table `table` for a point whose K*L' projections (L' >= table + 1) are `coords`.
  HashCode table_code(std::span<const double> coords, std::size_t table) const;

  /// Rows of the bucket keyed by `codes` in `table`; empty if no such bucket.
  std::span<const std::uint32_t> bucket(std::size_t table, std::span<const Code> codes) const;

  std::size_t num_buckets(std::size_t table) const;
  /// All buckets of a table as id lists, in key order.
  std::vector<std::vector<PointId>> buckets(std::size_t table) const;

  /// Binary snapshot, little-endian:
  ///   "LSHI" | u32 version=1 | u32 K | u32 L | u8 scheme | f64 w | u64 seed | u32 dim | u64 N |
  ///   N * i64 ids | per table: u32 buckets, per bucket: K * i64 codes, u32 count, count * u32 rows.
  /// The ensemble is regenerated from the seed on load.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static LshIndex load(std::istream& in);
  static LshIndex load(const std::filesystem::path& path);

 private:
  struct Table {
    std::vector<std::uint64_t> hashes;  ///< per bucket, sorted
    std::vector<Code> codes;            ///< per bucket, K codes
    std::vector<std::uint32_t> starts;  ///< bucket b owns rows[starts[b], starts[b+1])
    std::vector<std::uint32_t> rows;
  };

  LshIndex(LshConfig config, ProjectionEnsemble ensemble, std::vector<PointId> ids);
  void fill_table(std::size_t table, std::span<const Code> point_codes);
  void code_into(std::span<const double> coords, std::size_t table, std::span<Code> out) const;

  LshConfig config_;
  ProjectionEnsemble ensemble_;
  std::vector<PointId> ids_;
  std::vector<Table> tables_;
};

}  // namespace rplsh
