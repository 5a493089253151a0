#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "rplsh/projections.hpp"
#include "rplsh/scheme.hpp"

namespace rplsh {

/// Ids of the T rows with the largest inner product with q (unit vectors: smallest Euclidean
/// distance), best first, ties by ascending id. Throws TTooLarge if T > data.size().
std::vector<PointId> brute_force_top_t(const Dataset& data, std::span<const double> q, std::size_t T);

/// Top-T lists for every query row.
std::vector<std::vector<PointId>> ground_truth(const Dataset& data, const Dataset& queries, std::size_t T,
                                              std::size_t workers = 1);

/// |retrieved ∩ truth| / |truth|. `retrieved` is a set in any order; 0 for empty truth.
double recall(std::span<const PointId> retrieved, std::span<const PointId> truth);

struct SweepSpec {
  std::vector<std::size_t> K_values;
  std::vector<std::size_t> L_values;
  std::vector<double> w_values;
  Scheme scheme = Scheme::uq;
  std::size_t T = 10;
  std::vector<double> target_recalls;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Mean recall and mean fraction retrieved over the query set for one (scheme, K, L, w).
struct CellStats {
  Scheme scheme = Scheme::uq;
  std::size_t K = 0;
  std::size_t L = 0;
  double w = 0.0;
  double mean_recall = 0.0;
  double mean_fraction = 0.0;
};

struct SweepRow {
  Scheme scheme = Scheme::uq;
  double w = 0.0;
  double target_recall = 0.0;
  /// Smallest mean fraction retrieved among (K, L) with mean recall >= target. For an
  /// infeasible row: the values of the (K, L) with the highest mean recall.
  double best_fraction = 0.0;
  double achieved_recall = 0.0;
  std::size_t K = 0;
  std::size_t L = 0;
  bool feasible = false;
};

struct SweepResult {
  std::vector<CellStats> cells;  ///< ordered by scheme, K, w, L
  std::vector<SweepRow> rows;    ///< ordered by scheme, w, target recall
};

/// The (K, L, w) sweep for spec.scheme. See run_sweeps().
SweepResult run_sweep(const Dataset& data, const Dataset& queries, const SweepSpec& spec, std::size_t workers = 1);

/// Sweeps several schemes with shared projections: every scheme sees the ensemble seeded by
/// derive_seed(spec.seed, K), the same for all w and L (spec.scheme is ignored). An index with
/// L tables is the first L tables of the max(L) index, so each (scheme, K, w) is built once and
/// every L is read off the running union. Cells run on `workers` threads; output does not
/// depend on the worker count. `truth` may be passed in (e.g. from a cache).
SweepResult run_sweeps(const Dataset& data, const Dataset& queries, const SweepSpec& spec,
                       std::span<const Scheme> schemes, std::size_t workers = 1,
                       const std::vector<std::vector<PointId>>* truth = nullptr);

/// Best (K, L) per (scheme, w, target) from cell statistics.
std::vector<SweepRow> select_best(std::span<const CellStats> cells, std::span<const double> target_recalls);

/// Header `scheme,w,target_recall,best_fraction,achieved_recall,K,L,feasible`.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
/// Header `scheme,K,L,w,mean_recall,mean_fraction`.
void write_cells_csv(std::ostream& out, std::span<const CellStats> cells);

struct SyntheticData {
  Dataset data;     ///< ids 0 .. N-1
  Dataset queries;  ///< ids N .. N+Q-1, drawn independently from the same mixture
};

/// Gaussian mixture on the sphere: unit-norm centers, each point = center + spread * g / sqrt(D)
/// with g ~ N(0, I), then normalized. Cluster-mates have correlation about 1 / (1 + spread^2).
SyntheticData make_synthetic(std::size_t n, std::size_t dim, std::size_t num_clusters, double spread,
                             std::uint64_t seed, std::size_t num_queries);

/// Median over queries of the correlation with the T-th nearest neighbor.
double median_kth_correlation(const Dataset& data, const Dataset& queries, std::size_t T, std::size_t workers = 1);

/// FNV-1a over dimension, ids and value bytes.
std::uint64_t dataset_fingerprint(const Dataset& data);

/// Ground truth cached under `dir` in a file keyed by both fingerprints and T:
///   "LSHG" | u32 version=1 | u64 data fp | u64 query fp | u32 T | u32 queries | queries * T i64.
/// A missing or mismatching file is recomputed and rewritten.
std::vector<std::vector<PointId>> cached_ground_truth(const std::filesystem::path& dir, const Dataset& data,
                                                      const Dataset& queries, std::size_t T,
                                                      std::size_t workers = 1);

}  // namespace rplsh
