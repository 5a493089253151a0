#include "rplsh/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "rplsh/csv.hpp"
#include "rplsh/dataset_io.hpp"
#include "rplsh/errors.hpp"
#include "rplsh/lsh_index.hpp"
#include "rplsh/parallel.hpp"
#include "rplsh/rng.hpp"

namespace rplsh {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Scratch for union counting: a point is in the current union iff its stamp equals
// the current query stamp.
struct UnionScratch {
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint8_t> is_truth;
  std::uint32_t current = 0;
};

}  // namespace

std::vector<PointId> brute_force_top_t(const Dataset& data, std::span<const double> q, std::size_t T) {
  if (T == 0) throw InvalidParams("T must be >= 1");
  if (T > data.size())
    throw TTooLarge("T=" + std::to_string(T) + " exceeds dataset size " + std::to_string(data.size()));
  if (q.size() != data.dim()) throw DimensionMismatch(data.dim(), q.size());
  std::vector<std::pair<double, PointId>> scored(data.size());
  for (std::size_t r = 0; r < data.size(); ++r) scored[r] = {dot(data.row(r), q), data.id(r)};
  auto better = [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(T), scored.end(), better);
  std::vector<PointId> out(T);
  for (std::size_t i = 0; i < T; ++i) out[i] = scored[i].second;
  return out;
}

std::vector<std::vector<PointId>> ground_truth(const Dataset& data, const Dataset& queries, std::size_t T,
                                              std::size_t workers) {
  std::vector<std::vector<PointId>> out(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t i) { out[i] = brute_force_top_t(data, queries.row(i), T); });
  return out;
}

double recall(std::span<const PointId> retrieved, std::span<const PointId> truth) {
  if (truth.empty()) return 0.0;
  const std::unordered_set<PointId> got(retrieved.begin(), retrieved.end());
  std::size_t hits = 0;
  for (PointId id : truth) hits += got.count(id);
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

void SweepSpec::validate() const {
  if (K_values.empty() || L_values.empty() || w_values.empty() || target_recalls.empty())
    throw InvalidParams("sweep lists must be nonempty");
  for (auto k : K_values)
    if (k == 0) throw InvalidParams("K values must be >= 1");
  for (auto l : L_values)
    if (l == 0) throw InvalidParams("L values must be >= 1");
  for (double w : w_values)
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidParams("w values must be positive");
  for (double r : target_recalls)
    if (!(r > 0.0 && r <= 1.0)) throw InvalidParams("target recalls must lie in (0, 1]");
  if (T == 0) throw InvalidParams("T must be >= 1");
}

std::vector<SweepRow> select_best(std::span<const CellStats> cells, std::span<const double> target_recalls) {
  // Distinct (scheme, w) in first-seen order, then sorted by scheme and w.
  std::vector<std::pair<Scheme, double>> keys;
  for (const auto& c : cells) {
    const std::pair<Scheme, double> key{c.scheme, c.w};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());

  std::vector<SweepRow> rows;
  for (const auto& [scheme, w] : keys) {
    std::vector<const CellStats*> group;
    for (const auto& c : cells)
      if (c.scheme == scheme && c.w == w) group.push_back(&c);
    std::sort(group.begin(), group.end(),
              [](const CellStats* a, const CellStats* b) { return a->K != b->K ? a->K < b->K : a->L < b->L; });
    for (double target : target_recalls) {
      const CellStats* best = nullptr;
      const CellStats* closest = nullptr;
      for (const CellStats* c : group) {
        if (c->mean_recall >= target && (!best || c->mean_fraction < best->mean_fraction)) best = c;
        if (!closest || c->mean_recall > closest->mean_recall) closest = c;
      }
      const CellStats* pick = best ? best : closest;
      rows.push_back({scheme, w, target, pick->mean_fraction, pick->mean_recall, pick->K, pick->L, best != nullptr});
    }
  }
  return rows;
}

SweepResult run_sweeps(const Dataset& data, const Dataset& queries, const SweepSpec& spec,
                       std::span<const Scheme> schemes, std::size_t workers,
                       const std::vector<std::vector<PointId>>* truth) {
  spec.validate();
  if (schemes.empty()) throw InvalidParams("no scheme to sweep");
  if (data.empty() || queries.empty()) throw EmptyDataset();
  if (queries.dim() != data.dim()) throw DimensionMismatch(data.dim(), queries.dim());
  if (spec.T > data.size())
    throw TTooLarge("T=" + std::to_string(spec.T) + " exceeds dataset size " + std::to_string(data.size()));

  std::vector<std::vector<PointId>> computed;
  if (!truth) {
    computed = ground_truth(data, queries, spec.T, workers);
    truth = &computed;
  }
  if (truth->size() != queries.size()) throw InvalidParams("ground truth does not match the query set");

  std::unordered_map<PointId, std::uint32_t> row_of;
  row_of.reserve(data.size());
  for (std::size_t r = 0; r < data.size(); ++r) row_of.emplace(data.id(r), static_cast<std::uint32_t>(r));
  std::vector<std::vector<std::uint32_t>> truth_rows(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q)
    for (PointId id : (*truth)[q]) {
      auto it = row_of.find(id);
      if (it == row_of.end()) throw InvalidParams("ground truth names an id missing from the dataset");
      truth_rows[q].push_back(it->second);
    }

  std::vector<std::size_t> Ls = spec.L_values;
  std::sort(Ls.begin(), Ls.end());
  Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());
  std::vector<std::size_t> Ks = spec.K_values;
  std::sort(Ks.begin(), Ks.end());
  Ks.erase(std::unique(Ks.begin(), Ks.end()), Ks.end());
  std::vector<double> ws = spec.w_values;
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  const std::size_t max_L = Ls.back();
  const std::size_t n = data.size();
  const double total_truth = static_cast<double>(queries.size() * spec.T);

  struct Slot {
    Scheme scheme;
    std::size_t K;
    double w;
    std::vector<CellStats> stats;  // one per L
  };
  std::vector<Slot> slots;
  for (Scheme s : schemes)
    for (std::size_t K : Ks)
      for (double w : ws) slots.push_back({s, K, w, {}});

  for (std::size_t K : Ks) {
    const std::uint64_t seed = derive_seed(spec.seed, K);
    const ProjectedData pd = project_dataset(data, K, max_L, seed);
    const ProjectedData pq = project_dataset(queries, K, max_L, seed);

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].K == K) todo.push_back(i);

    // Cells of one K share the projections.
    parallel_for(todo.size(), workers, [&](std::size_t t) {
      UnionScratch us;
      us.stamp.assign(n, 0);
      us.is_truth.assign(n, 0);

      Slot& slot = slots[todo[t]];
      LshConfig config{K, max_L, {slot.scheme, slot.w}, seed};
      const LshIndex index = LshIndex::build(pd, config);

      std::vector<std::uint64_t> union_sum(Ls.size(), 0);
      std::vector<std::uint64_t> hit_sum(Ls.size(), 0);
      std::vector<Code> codes(K);
      for (std::size_t q = 0; q < pq.ids.size(); ++q) {
        ++us.current;
        for (auto r : truth_rows[q]) us.is_truth[r] = 1;
        const auto coords = pq.row(q);
        std::uint64_t in_union = 0;
        std::uint64_t hits = 0;
        std::size_t next_l = 0;
        for (std::size_t table = 0; table < max_L; ++table) {
          if (in_union < n) {
            const HashCode h = index.table_code(coords, table);
            for (std::uint32_t r : index.bucket(table, h.codes)) {
              if (us.stamp[r] == us.current) continue;
              us.stamp[r] = us.current;
              ++in_union;
              hits += us.is_truth[r];
            }
          }
          while (next_l < Ls.size() && Ls[next_l] == table + 1) {
            union_sum[next_l] += in_union;
            hit_sum[next_l] += hits;
            ++next_l;
          }
        }
        for (auto r : truth_rows[q]) us.is_truth[r] = 0;
      }
      const double nq = static_cast<double>(pq.ids.size());
      for (std::size_t li = 0; li < Ls.size(); ++li)
        slot.stats.push_back({slot.scheme, K, Ls[li], slot.w, static_cast<double>(hit_sum[li]) / total_truth,
                              static_cast<double>(union_sum[li]) / (nq * static_cast<double>(n))});
    });
  }

  SweepResult result;
  for (const auto& slot : slots) result.cells.insert(result.cells.end(), slot.stats.begin(), slot.stats.end());
  result.rows = select_best(result.cells, spec.target_recalls);
  return result;
}

SweepResult run_sweep(const Dataset& data, const Dataset& queries, const SweepSpec& spec, std::size_t workers) {
  const Scheme schemes[] = {spec.scheme};
  return run_sweeps(data, queries, spec, schemes, workers);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "scheme,w,target_recall,best_fraction,achieved_recall,K,L,feasible\n";
  for (const auto& r : rows)
    out << to_string(r.scheme) << ',' << format_real(r.w) << ',' << format_real(r.target_recall) << ','
        << format_real(r.best_fraction) << ',' << format_real(r.achieved_recall) << ',' << r.K << ',' << r.L << ','
        << (r.feasible ? 1 : 0) << '\n';
}

void write_cells_csv(std::ostream& out, std::span<const CellStats> cells) {
  out << "scheme,K,L,w,mean_recall,mean_fraction\n";
  for (const auto& c : cells)
    out << to_string(c.scheme) << ',' << c.K << ',' << c.L << ',' << format_real(c.w) << ','
        << format_real(c.mean_recall) << ',' << format_real(c.mean_fraction) << '\n';
}

SyntheticData make_synthetic(std::size_t n, std::size_t dim, std::size_t num_clusters, double spread,
                             std::uint64_t seed, std::size_t num_queries) {
  if (n == 0 || dim == 0 || num_clusters == 0) throw InvalidParams("N, D and cluster count must be >= 1");
  if (!(spread >= 0.0) || !std::isfinite(spread)) throw InvalidParams("spread must be a finite value >= 0");

  std::vector<std::vector<double>> centers;
  centers.reserve(num_clusters);
  for (std::size_t c = 0; c < num_clusters; ++c) {
    Rng rng(derive_seed(derive_seed(seed, 0), c));
    std::vector<double> mu(dim);
    // Redraw the (probability zero) all-zero center.
    do {
      for (auto& x : mu) x = rng.normal();
    } while (std::all_of(mu.begin(), mu.end(), [](double x) { return x == 0.0; }));
    centers.push_back(normalize(mu).values);
  }

  const double scale = spread / std::sqrt(static_cast<double>(dim));
  auto draw = [&](Dataset& out, std::size_t count, std::uint64_t stream, PointId first_id) {
    Rng rng(derive_seed(seed, stream));
    std::vector<double> v(dim);
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto c = std::min(num_clusters - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(num_clusters)));
      for (std::size_t d = 0; d < dim; ++d) v[d] = centers[c][d] + scale * rng.normal();
      if (spread == 0.0) {
        out.add(first_id + static_cast<PointId>(i), centers[c]);
      } else {
        out.add(normalize(v, first_id + static_cast<PointId>(i)));
      }
    }
  };

  SyntheticData s{Dataset(dim), Dataset(dim)};
  draw(s.data, n, 1, 0);
  if (num_queries > 0) draw(s.queries, num_queries, 2, static_cast<PointId>(n));
  return s;
}

double median_kth_correlation(const Dataset& data, const Dataset& queries, std::size_t T, std::size_t workers) {
  if (queries.empty()) throw EmptyDataset();
  const auto truth = ground_truth(data, queries, T, workers);
  std::unordered_map<PointId, std::size_t> row_of;
  for (std::size_t r = 0; r < data.size(); ++r) row_of.emplace(data.id(r), r);
  std::vector<double> kth(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) kth[q] = dot(data.row(row_of.at(truth[q].back())), queries.row(q));
  const auto mid = kth.begin() + static_cast<std::ptrdiff_t>(kth.size() / 2);
  std::nth_element(kth.begin(), mid, kth.end());
  if (kth.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(kth.begin(), mid);
  return 0.5 * (lower + upper);
}

std::uint64_t dataset_fingerprint(const Dataset& data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001B3ULL;
    }
  };
  const std::uint64_t dim = data.dim();
  feed(&dim, sizeof dim);
  feed(data.ids().data(), data.ids().size_bytes());
  feed(data.values().data(), data.values().size_bytes());
  return h;
}

std::vector<std::vector<PointId>> cached_ground_truth(const std::filesystem::path& dir, const Dataset& data,
                                                      const Dataset& queries, std::size_t T, std::size_t workers) {
  const std::uint64_t fd = dataset_fingerprint(data);
  const std::uint64_t fq = dataset_fingerprint(queries);
  char name[96];
  std::snprintf(name, sizeof name, "gt_%016llx_%016llx_T%zu.bin", static_cast<unsigned long long>(fd),
                static_cast<unsigned long long>(fq), T);
  const auto path = dir / name;

  if (std::ifstream in(path, std::ios::binary); in) {
    try {
      le::Reader r(in);
      r.expect_magic("LSHG");
      if (r.u32() == 1 && r.u64() == fd && r.u64() == fq && r.u32() == T && r.u32() == queries.size()) {
        std::vector<std::vector<PointId>> truth(queries.size(), std::vector<PointId>(T));
        for (auto& list : truth)
          for (auto& id : list) id = r.i64();
        r.expect_end();
        return truth;
      }
    } catch (const FormatError&) {
      // Fall through and rebuild a corrupt cache entry.
    }
  }

  auto truth = ground_truth(data, queries, T, workers);
  std::filesystem::create_directories(dir);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write ground-truth cache " + path.string());
  out.write("LSHG", 4);
  le::put_u32(out, 1);
  le::put_u64(out, fd);
  le::put_u64(out, fq);
  le::put_u32(out, static_cast<std::uint32_t>(T));
  le::put_u32(out, static_cast<std::uint32_t>(queries.size()));
  for (const auto& list : truth)
    for (PointId id : list) le::put_i64(out, id);
  if (!out) throw IoError("write failed for " + path.string());
  return truth;
}

}  // namespace rplsh
