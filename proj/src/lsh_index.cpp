#include "rplsh/lsh_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "rplsh/dataset_io.hpp"
#include "rplsh/errors.hpp"
#include "rplsh/rng.hpp"

namespace rplsh {
namespace {

constexpr std::uint32_t kSnapshotVersion = 1;
constexpr double kUnitNormSlack = 1e-8;
constexpr double kCodeLimit = 0x1.0p62;

std::uint64_t hash_codes(std::span<const Code> codes) {
  std::uint64_t h = 0xC0DEC0DEULL ^ codes.size();
  for (Code c : codes) h = mix64(h ^ static_cast<std::uint64_t>(c));
  return h;
}

void check_unit(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  if (!(std::abs(s - 1.0) <= kUnitNormSlack)) throw InvalidParams("vector is not unit norm; normalize first");
}

}  // namespace

void LshConfig::validate() const {
  if (K == 0 || L == 0) throw InvalidParams("K and L must be >= 1");
  params.validate();
}

ProjectedData project_dataset(const Dataset& data, std::size_t K, std::size_t max_tables, std::uint64_t seed) {
  if (data.empty()) throw EmptyDataset();
  // Scheme and w do not influence the directions.
  const auto e = generate_ensemble(data.dim(), K, max_tables, Scheme::uq, 1.0, seed);
  ProjectedData p;
  p.dim = data.dim();
  p.K = K;
  p.max_tables = max_tables;
  p.seed = seed;
  p.ids.assign(data.ids().begin(), data.ids().end());
  p.coords = project_all(data, e);
  return p;
}

LshIndex::LshIndex(LshConfig config, ProjectionEnsemble ensemble, std::vector<PointId> ids)
    : config_(config), ensemble_(std::move(ensemble)), ids_(std::move(ids)), tables_(config.L) {}

void LshIndex::code_into(std::span<const double> coords, std::size_t table, std::span<Code> out) const {
  const std::size_t k = config_.K;
  const double w = config_.params.w;
  const bool offset = config_.params.scheme == Scheme::uq_offset;
  const auto offsets = ensemble_.offsets();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = table * k + i;
    // Same arithmetic as code_uq / code_uq_offset.
    const double bin = std::floor((offset ? coords[j] + offsets[j] : coords[j]) / w);
    if (!(std::abs(bin) < kCodeLimit)) throw InvalidParams("quantized value overflows the code range");
    out[i] = static_cast<Code>(bin);
  }
}

void LshIndex::fill_table(std::size_t table, std::span<const Code> point_codes) {
  const std::size_t k = config_.K;
  const std::size_t n = ids_.size();
  std::vector<std::uint64_t> hashes(n);
  for (std::size_t r = 0; r < n; ++r) hashes[r] = hash_codes(point_codes.subspan(r * k, k));

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (hashes[a] != hashes[b]) return hashes[a] < hashes[b];
    const Code* ca = point_codes.data() + a * k;
    const Code* cb = point_codes.data() + b * k;
    const auto cmp = std::lexicographical_compare_three_way(ca, ca + k, cb, cb + k);
    if (cmp != 0) return cmp < 0;
    return a < b;
  });

  Table& t = tables_[table];
  t = Table{};
  t.rows = order;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::uint32_t r = order[pos];
    const Code* c = point_codes.data() + r * k;
    const bool new_bucket = pos == 0 || hashes[r] != t.hashes.back() ||
                            !std::equal(c, c + k, t.codes.end() - static_cast<std::ptrdiff_t>(k));
    if (new_bucket) {
      t.hashes.push_back(hashes[r]);
      t.codes.insert(t.codes.end(), c, c + k);
      t.starts.push_back(static_cast<std::uint32_t>(pos));
    }
  }
  t.starts.push_back(static_cast<std::uint32_t>(n));
}

LshIndex LshIndex::build(const Dataset& data, const LshConfig& config) {
  config.validate();
  if (data.empty()) throw EmptyDataset();
  if (data.size() > std::numeric_limits<std::uint32_t>::max()) throw InvalidParams("dataset too large");
  for (std::size_t r = 0; r < data.size(); ++r) check_unit(data.row(r));
  ProjectedData p;
  p.dim = data.dim();
  p.K = config.K;
  p.max_tables = config.L;
  p.seed = config.seed;
  p.ids.assign(data.ids().begin(), data.ids().end());
  auto e = generate_ensemble(data.dim(), config.K, config.L, config.params.scheme, config.params.w, config.seed);
  p.coords = project_all(data, e);
  return build(p, config);
}

LshIndex LshIndex::build(const ProjectedData& projected, const LshConfig& config) {
  config.validate();
  if (projected.ids.empty()) throw EmptyDataset();
  if (projected.K != config.K) throw InvalidParams("projection K does not match the index K");
  if (projected.seed != config.seed) throw InvalidParams("projection seed does not match the index seed");
  if (config.L > projected.max_tables) throw InvalidParams("index needs more tables than were projected");
  if (projected.coords.size() != projected.ids.size() * projected.stride())
    throw DimensionMismatch(projected.ids.size() * projected.stride(), projected.coords.size());

  LshIndex index(config,
                 generate_ensemble(projected.dim, config.K, config.L, config.params.scheme, config.params.w,
                                   config.seed),
                 projected.ids);
  const std::size_t n = projected.ids.size();
  std::vector<Code> codes(n * config.K);
  for (std::size_t t = 0; t < config.L; ++t) {
    for (std::size_t r = 0; r < n; ++r)
      index.code_into(projected.row(r), t, std::span<Code>(codes.data() + r * config.K, config.K));
    index.fill_table(t, codes);
  }
  return index;
}

HashCode LshIndex::table_code(std::span<const double> coords, std::size_t table) const {
  if (table >= config_.L) throw IndexOutOfRange("table " + std::to_string(table) + " out of range");
  if (coords.size() < (table + 1) * config_.K) throw DimensionMismatch((table + 1) * config_.K, coords.size());
  HashCode h;
  h.codes.resize(config_.K);
  code_into(coords, table, h.codes);
  return h;
}

std::span<const std::uint32_t> LshIndex::bucket(std::size_t table, std::span<const Code> codes) const {
  if (table >= config_.L) throw IndexOutOfRange("table " + std::to_string(table) + " out of range");
  if (codes.size() != config_.K) throw DimensionMismatch(config_.K, codes.size());
  const Table& t = tables_[table];
  const std::uint64_t h = hash_codes(codes);
  auto [lo, hi] = std::equal_range(t.hashes.begin(), t.hashes.end(), h);
  for (auto it = lo; it != hi; ++it) {
    const std::size_t b = static_cast<std::size_t>(it - t.hashes.begin());
    const Code* c = t.codes.data() + b * config_.K;
    if (std::equal(codes.begin(), codes.end(), c))
      return {t.rows.data() + t.starts[b], t.starts[b + 1] - t.starts[b]};
  }
  return {};
}

std::vector<PointId> LshIndex::query(std::span<const double> q) const {
  if (q.size() != dim()) throw DimensionMismatch(dim(), q.size());
  check_unit(q);
  std::vector<double> coords(ensemble_.num_directions());
  project_into(q, ensemble_, coords);
  std::vector<Code> codes(config_.K);
  std::vector<std::uint32_t> rows;
  for (std::size_t t = 0; t < config_.L; ++t) {
    code_into(coords, t, codes);
    const auto b = bucket(t, codes);
    rows.insert(rows.end(), b.begin(), b.end());
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::vector<PointId> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(ids_[r]);
  std::sort(out.begin(), out.end());
  return out;
}

double LshIndex::fraction_retrieved(std::span<const double> q) const {
  return static_cast<double>(query(q).size()) / static_cast<double>(size());
}

std::size_t LshIndex::num_buckets(std::size_t table) const {
  if (table >= config_.L) throw IndexOutOfRange("table " + std::to_string(table) + " out of range");
  return tables_[table].hashes.size();
}

std::vector<std::vector<PointId>> LshIndex::buckets(std::size_t table) const {
  const std::size_t nb = num_buckets(table);
  const Table& t = tables_[table];
  std::vector<std::vector<PointId>> out(nb);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::uint32_t i = t.starts[b]; i < t.starts[b + 1]; ++i) out[b].push_back(ids_[t.rows[i]]);
  return out;
}

void LshIndex::save(std::ostream& out) const {
  out.write("LSHI", 4);
  le::put_u32(out, kSnapshotVersion);
  le::put_u32(out, static_cast<std::uint32_t>(config_.K));
  le::put_u32(out, static_cast<std::uint32_t>(config_.L));
  const char scheme = config_.params.scheme == Scheme::uq ? 0 : 1;
  out.write(&scheme, 1);
  le::put_f64(out, config_.params.w);
  le::put_u64(out, config_.seed);
  le::put_u32(out, static_cast<std::uint32_t>(dim()));
  le::put_u64(out, ids_.size());
  for (PointId id : ids_) le::put_i64(out, id);
  for (const Table& t : tables_) {
    const std::size_t nb = t.hashes.size();
    le::put_u32(out, static_cast<std::uint32_t>(nb));
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t i = 0; i < config_.K; ++i) le::put_i64(out, t.codes[b * config_.K + i]);
      le::put_u32(out, t.starts[b + 1] - t.starts[b]);
      for (std::uint32_t i = t.starts[b]; i < t.starts[b + 1]; ++i) le::put_u32(out, t.rows[i]);
    }
  }
}

void LshIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  save(out);
  if (!out) throw IoError("write failed for " + path.string());
}

LshIndex LshIndex::load(std::istream& in) {
  le::Reader reader(in);
  reader.expect_magic("LSHI");
  const std::uint32_t version = reader.u32();
  if (version != kSnapshotVersion)
    throw FormatError("unsupported snapshot version " + std::to_string(version) + " at byte offset 4");
  LshConfig config;
  config.K = reader.u32();
  config.L = reader.u32();
  const std::uint64_t scheme_at = reader.offset();
  const std::uint8_t scheme = reader.u8();
  if (scheme > 1) throw FormatError("bad scheme byte at byte offset " + std::to_string(scheme_at));
  config.params.scheme = scheme == 0 ? Scheme::uq : Scheme::uq_offset;
  config.params.w = reader.f64();
  config.seed = reader.u64();
  const std::uint32_t dim = reader.u32();
  const std::uint64_t n = reader.u64();
  try {
    config.validate();
  } catch (const InvalidParams& e) {
    throw FormatError(std::string("invalid configuration in snapshot header: ") + e.what());
  }
  if (dim == 0 || n == 0 || n > std::numeric_limits<std::uint32_t>::max())
    throw FormatError("invalid dimension or point count in snapshot header");

  // Grow as ids arrive so a corrupt count fails on the read, not on the allocation.
  std::vector<PointId> ids;
  ids.reserve(std::min<std::uint64_t>(n, 1u << 20));
  for (std::uint64_t i = 0; i < n; ++i) ids.push_back(reader.i64());
  LshIndex index(config, generate_ensemble(dim, config.K, config.L, config.params.scheme, config.params.w, config.seed),
                 std::move(ids));

  std::vector<Code> point_codes(n * config.K);
  std::vector<std::uint8_t> seen(n);
  for (std::size_t t = 0; t < config.L; ++t) {
    std::fill(seen.begin(), seen.end(), 0);
    const std::uint32_t nb = reader.u32();
    for (std::uint32_t b = 0; b < nb; ++b) {
      std::vector<Code> codes(config.K);
      for (auto& c : codes) c = reader.i64();
      const std::uint32_t count = reader.u32();
      for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint64_t at = reader.offset();
        const std::uint32_t row = reader.u32();
        if (row >= n || seen[row])
          throw FormatError("invalid or repeated row " + std::to_string(row) + " at byte offset " + std::to_string(at));
        seen[row] = 1;
        std::copy(codes.begin(), codes.end(), point_codes.begin() + static_cast<std::ptrdiff_t>(row * config.K));
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      throw FormatError("table " + std::to_string(t) + " does not cover every point (before byte offset " +
                        std::to_string(reader.offset()) + ")");
    index.fill_table(t, point_codes);
  }
  reader.expect_end();
  return index;
}

LshIndex LshIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return load(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace rplsh
