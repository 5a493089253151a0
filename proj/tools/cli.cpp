#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "rplsh/collision_model.hpp"
#include "rplsh/csv.hpp"
#include "rplsh/dataset_io.hpp"
#include "rplsh/errors.hpp"
#include "rplsh/evaluation.hpp"
#include "rplsh/lsh_index.hpp"
#include "rplsh/parallel.hpp"
#include "rplsh/synthetic_defaults.hpp"

namespace rplsh::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double to_real(const std::string& text, const std::string& flag) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (text.empty() || ec != std::errc{} || ptr != e || !std::isfinite(v))
    throw UsageError(flag + ": '" + text + "' is not a number");
  return v;
}

std::size_t to_size(const std::string& text, const std::string& flag) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw UsageError(flag + ": '" + text + "' is not a non-negative integer");
  return v;
}

/// "lo:hi:step" inclusive.
std::vector<double> parse_range(const std::string& text, const std::string& flag) {
  const auto parts = split_fields(text, ':');
  if (parts.size() != 3) throw UsageError(flag + ": expected lo:hi:step, got '" + text + "'");
  try {
    return make_range(to_real(parts[0], flag), to_real(parts[1], flag), to_real(parts[2], flag));
  } catch (const InvalidParams& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

/// Comma list whose items are numbers or lo:hi:step ranges.
std::vector<double> parse_reals(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& item : split_fields(text)) {
    if (item.empty()) continue;
    if (item.find(':') != std::string::npos) {
      const auto r = parse_range(item, flag);
      out.insert(out.end(), r.begin(), r.end());
    } else {
      out.push_back(to_real(item, flag));
    }
  }
  if (out.empty()) throw UsageError(flag + ": list is empty");
  return out;
}

/// Comma list whose items are integers or lo:hi[:step] ranges.
std::vector<std::size_t> parse_sizes(const std::string& text, const std::string& flag) {
  std::vector<std::size_t> out;
  for (const auto& item : split_fields(text)) {
    if (item.empty()) continue;
    const auto parts = split_fields(item, ':');
    if (parts.size() == 1) {
      out.push_back(to_size(item, flag));
      continue;
    }
    if (parts.size() > 3) throw UsageError(flag + ": bad range '" + item + "'");
    const std::size_t lo = to_size(parts[0], flag);
    const std::size_t hi = to_size(parts[1], flag);
    const std::size_t step = parts.size() == 3 ? to_size(parts[2], flag) : 1;
    if (step == 0 || hi < lo) throw UsageError(flag + ": bad range '" + item + "'");
    for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
  }
  if (out.empty()) throw UsageError(flag + ": list is empty");
  return out;
}

std::vector<Scheme> parse_schemes(const std::string& text) {
  if (text == "both") return {Scheme::uq, Scheme::uq_offset};
  try {
    return {parse_scheme(text)};
  } catch (const InvalidParams& e) {
    throw UsageError(std::string("--scheme: ") + e.what());
  }
}

/// --out target: a file, or the fallback stream when the path is empty or "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed" + (path_.empty() ? std::string() : " for " + path_));
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

Dataset load_normalized(const std::string& path, const std::string& format, bool id_column, PointId first_id) {
  CsvOptions options;
  options.id_column = id_column;
  options.first_id = first_id;
  DatasetFormat f;
  try {
    f = parse_format(format);
  } catch (const InvalidParams& e) {
    throw UsageError(std::string("--format: ") + e.what());
  }
  Dataset raw = load_dataset(path, f, options);
  if (raw.empty()) throw FormatError(path + ": no vectors");
  try {
    return raw.normalized();
  } catch (const ZeroVector&) {
    throw FormatError(path + ": contains an all-zero vector");
  }
}

// ---------------------------------------------------------------- collision

struct CollisionOptions {
  std::string scheme = "both";
  std::string rho = "0,0.25,0.5,0.75,0.9,0.99";
  std::string w_range = "0.25:8:0.25";
  double tol = kDefaultTolerance;
  std::size_t workers = default_workers();
  std::string out;
};

int run_collision(const CollisionOptions& o, std::ostream& out) {
  const auto schemes = parse_schemes(o.scheme);
  const auto rhos = parse_reals(o.rho, "--rho");
  const auto ws = parse_range(o.w_range, "--w-range");
  const auto rows = curve_sweep(schemes, rhos, ws, o.tol, o.workers);
  Output sink(o.out, out);
  write_curve_csv(sink.stream(), rows);
  sink.finish();
  return kSuccess;
}

// ---------------------------------------------------------------- gap

struct GapOptions {
  std::string scheme = "both";
  std::string rho0 = "0.5,0.9,0.95,0.99";
  std::string c_range;  // empty: 20 evenly spaced c in [1, max_c(rho0)] per rho0
  std::string w_range = "0.25:8:0.25";
  double tol = kDefaultTolerance;
  std::size_t workers = default_workers();
  std::string out;
  std::string by_c_out;
  std::string summary_out;
};

int run_gap(const GapOptions& o, std::ostream& out, std::ostream& err) {
  const auto schemes = parse_schemes(o.scheme);
  const auto rho0s = parse_reals(o.rho0, "--rho0");
  const auto ws = parse_range(o.w_range, "--w-range");
  std::optional<std::vector<double>> cs;
  if (!o.c_range.empty()) cs = parse_reals(o.c_range, "--c-range");

  GapGrid all;
  for (double rho0 : rho0s) {
    std::vector<double> c_list;
    if (cs) {
      c_list = *cs;
    } else {
      if (!(rho0 > 0.0 && rho0 < 1.0)) throw UsageError("--rho0: values must lie in (0, 1)");
      const double top = max_c(rho0);
      for (int i = 0; i < 20; ++i) c_list.push_back(1.0 + (top - 1.0) * i / 19.0);
      c_list.back() = top;
    }
    const double r0[] = {rho0};
    auto g = gap_grid(schemes, r0, c_list, ws, o.tol, o.workers);
    all.cells.insert(all.cells.end(), g.cells.begin(), g.cells.end());
    all.optimal.insert(all.optimal.end(), g.optimal.begin(), g.optimal.end());
    all.warnings.insert(all.warnings.end(), g.warnings.begin(), g.warnings.end());
  }
  // Group by scheme first: gap_grid runs per rho0.
  auto by_scheme = [](const GapResult& a, const GapResult& b) { return a.scheme < b.scheme; };
  std::stable_sort(all.cells.begin(), all.cells.end(), by_scheme);
  std::stable_sort(all.optimal.begin(), all.optimal.end(), by_scheme);
  for (const auto& w : all.warnings) err << "warning: " << w << '\n';

  Output sink(o.out, out);
  write_gap_csv(sink.stream(), all.cells);
  sink.finish();

  if (!o.by_c_out.empty()) {
    auto cells = all.cells;
    std::stable_sort(cells.begin(), cells.end(), [](const GapResult& a, const GapResult& b) {
      if (a.scheme != b.scheme) return a.scheme < b.scheme;
      if (a.rho0 != b.rho0) return a.rho0 < b.rho0;
      if (a.w != b.w) return a.w < b.w;
      return a.c < b.c;
    });
    Output by_c(o.by_c_out, out);
    write_gap_csv(by_c.stream(), cells);
    by_c.finish();
  }
  if (!o.summary_out.empty()) {
    Output summary(o.summary_out, out);
    write_gap_csv(summary.stream(), all.optimal);
    summary.finish();
  }
  return kSuccess;
}

// ---------------------------------------------------------------- validate

struct ValidateOptions {
  std::string scheme = "uq";
  double rho = 0.0;
  double w = 1.0;
  std::uint64_t n = 1000000;
  std::uint64_t seed = 1;
  double tol = kDefaultTolerance;
  std::size_t workers = default_workers();
  std::string out;
};

int run_validate(const ValidateOptions& o, std::ostream& out) {
  const auto schemes = parse_schemes(o.scheme);
  if (schemes.size() != 1) throw UsageError("--scheme: validate takes uq or uq-offset");
  const Scheme scheme = schemes.front();
  const double analytic = collision_prob(scheme, o.rho, o.w, o.tol);
  const auto mc = monte_carlo_collision(scheme, o.rho, o.w, o.n, o.seed, o.workers);
  double z = 0.0;
  if (mc.std_error > 0.0) {
    z = (mc.estimate - analytic) / mc.std_error;
  } else if (mc.estimate != analytic) {
    z = mc.estimate > analytic ? INFINITY : -INFINITY;
  }
  const bool pass = std::abs(z) <= 4.0;
  Output sink(o.out, out);
  sink.stream() << "scheme,rho,w,n,seed,analytic,estimate,stderr,z,verdict\n"
                << to_string(scheme) << ',' << format_real(o.rho) << ',' << format_real(o.w) << ',' << o.n << ','
                << o.seed << ',' << format_real(analytic) << ',' << format_real(mc.estimate) << ','
                << format_real(mc.std_error) << ',' << format_real(z) << ',' << (pass ? "pass" : "fail") << '\n';
  sink.finish();
  return pass ? kSuccess : kValidationFailed;
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
  std::size_t n = synthetic_defaults::kPoints;
  std::size_t dim = synthetic_defaults::kDim;
  std::size_t clusters = synthetic_defaults::kClusters;
  double spread = synthetic_defaults::kSpread;
  std::size_t num_queries = synthetic_defaults::kQueries;
  std::uint64_t seed = synthetic_defaults::kSeed;
  std::string format = "csv";
  std::string out;
  std::string queries_out;
};

int run_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  const auto s = make_synthetic(o.n, o.dim, o.clusters, o.spread, o.seed, o.num_queries);
  DatasetFormat f;
  try {
    f = parse_format(o.format);
  } catch (const InvalidParams& e) {
    throw UsageError(std::string("--format: ") + e.what());
  }
  if (o.out.empty() || o.out == "-") {
    if (f == DatasetFormat::bin) throw UsageError("--out: binary output needs a file path");
    write_csv(out, s.data, true);
  } else {
    save_dataset(o.out, s.data, f);
  }
  if (!o.queries_out.empty()) save_dataset(o.queries_out, s.queries, f);
  err << "synthetic: " << s.data.size() << " points, " << s.queries.size() << " queries, dim " << o.dim << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- index / query

struct IndexOptions {
  std::string dataset;
  std::string format = "csv";
  bool id_column = false;
  std::size_t K = 10;
  std::size_t L = 10;
  std::string scheme = "uq";
  double w = 1.5;
  std::uint64_t seed = 1;
  std::string out;  // snapshot
};

LshConfig make_config(const IndexOptions& o) {
  const auto schemes = parse_schemes(o.scheme);
  if (schemes.size() != 1) throw UsageError("--scheme: an index uses uq or uq-offset");
  LshConfig c{o.K, o.L, {schemes.front(), o.w}, o.seed};
  try {
    c.validate();
  } catch (const InvalidParams& e) {
    throw UsageError(e.what());
  }
  return c;
}

int run_index(const IndexOptions& o, std::ostream& out) {
  const auto config = make_config(o);
  const Dataset data = load_normalized(o.dataset, o.format, o.id_column, 0);
  const auto index = LshIndex::build(data, config);
  if (!o.out.empty()) index.save(std::filesystem::path(o.out));
  out << "table,buckets,largest_bucket\n";
  for (std::size_t t = 0; t < config.L; ++t) {
    std::size_t largest = 0;
    for (const auto& b : index.buckets(t)) largest = std::max(largest, b.size());
    out << t << ',' << index.num_buckets(t) << ',' << largest << '\n';
  }
  return kSuccess;
}

struct QueryOptions {
  IndexOptions build;
  std::string index;
  std::string queries;
  std::string out;
};

int run_query(const QueryOptions& o, std::ostream& out) {
  if (o.index.empty() == o.build.dataset.empty()) throw UsageError("give exactly one of --index or --dataset");
  const LshIndex index = o.index.empty()
                             ? LshIndex::build(load_normalized(o.build.dataset, o.build.format, o.build.id_column, 0),
                                               make_config(o.build))
                             : LshIndex::load(std::filesystem::path(o.index));
  const Dataset queries = load_normalized(o.queries, o.build.format, o.build.id_column, 0);
  if (queries.dim() != index.dim()) throw UsageError("query dimension does not match the index");
  Output sink(o.out, out);
  auto& s = sink.stream();
  s << "query_id,num_retrieved,fraction_retrieved,retrieved_ids\n";
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto ids = index.query(queries.row(q));
    s << queries.id(q) << ',' << ids.size() << ','
      << format_real(static_cast<double>(ids.size()) / static_cast<double>(index.size())) << ',';
    for (std::size_t i = 0; i < ids.size(); ++i) s << (i ? " " : "") << ids[i];
    s << '\n';
  }
  sink.finish();
  return kSuccess;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  std::string dataset;
  std::string queries;
  std::string format = "csv";
  bool id_column = false;
  bool synthetic = false;
  std::size_t n = synthetic_defaults::kPoints;
  std::size_t dim = synthetic_defaults::kDim;
  std::size_t clusters = synthetic_defaults::kClusters;
  double spread = synthetic_defaults::kSpread;
  std::size_t num_queries = synthetic_defaults::kQueries;
  std::string scheme = "both";
  std::string K_list = "3:16";
  std::string L_list = "1,2,4,8,16,32,64";
  std::string w_range = "0.5:5:0.5";
  std::size_t top_t = synthetic_defaults::kTopT;
  std::string target_recalls = "0.5,0.8,0.9,0.95";
  std::uint64_t seed = 1;
  std::size_t workers = default_workers();
  std::string gt_cache;
  std::string out;
  std::string cells_out;
};

int run_sweep_cmd(const SweepOptions& o, std::ostream& out) {
  SweepSpec spec;
  spec.K_values = parse_sizes(o.K_list, "--K-list");
  spec.L_values = parse_sizes(o.L_list, "--L-list");
  spec.w_values = parse_reals(o.w_range, "--w-range");
  spec.T = o.top_t;
  spec.target_recalls = parse_reals(o.target_recalls, "--target-recalls");
  spec.seed = o.seed;
  const auto schemes = parse_schemes(o.scheme);
  spec.scheme = schemes.front();
  try {
    spec.validate();
  } catch (const InvalidParams& e) {
    throw UsageError(e.what());
  }

  Dataset data;
  Dataset queries;
  if (o.synthetic) {
    if (!o.dataset.empty() || !o.queries.empty()) throw UsageError("--synthetic excludes --dataset/--queries");
    auto s = make_synthetic(o.n, o.dim, o.clusters, o.spread, o.seed, o.num_queries);
    data = std::move(s.data);
    queries = std::move(s.queries);
  } else {
    if (o.dataset.empty() || o.queries.empty()) throw UsageError("sweep needs --dataset and --queries, or --synthetic");
    data = load_normalized(o.dataset, o.format, o.id_column, 0);
    // Without an id column, query ids continue after the dataset's so the two sets stay disjoint.
    queries = load_normalized(o.queries, o.format, o.id_column, static_cast<PointId>(data.size()));
  }

  std::vector<std::vector<PointId>> truth = o.gt_cache.empty()
                                                ? ground_truth(data, queries, spec.T, o.workers)
                                                : cached_ground_truth(o.gt_cache, data, queries, spec.T, o.workers);
  const auto result = run_sweeps(data, queries, spec, schemes, o.workers, &truth);

  Output sink(o.out, out);
  write_sweep_csv(sink.stream(), result.rows);
  sink.finish();
  if (!o.cells_out.empty()) {
    Output cells(o.cells_out, out);
    write_cells_csv(cells.stream(), result.cells);
    cells.finish();
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Random-projection LSH with uniform quantization (uq) and uniform quantization with random offset "
      "(uq-offset): collision probabilities, gaps, Monte Carlo validation, (K,L)-LSH indexing and "
      "recall/fraction-retrieved sweeps. Exit codes: 0 ok, 1 statistical validation failed, 2 usage, 3 I/O or format."};
  app.require_subcommand(1);

  CollisionOptions co;
  auto* collision = app.add_subcommand(
      "collision", "Collision probability curves. CSV columns: scheme,rho,w,p");
  collision->add_option("--scheme", co.scheme, "uq, uq-offset or both")->capture_default_str();
  collision->add_option("--rho", co.rho, "Comma-separated correlations in [0,1]")->capture_default_str();
  collision->add_option("--w-range", co.w_range, "Bin widths lo:hi:step")->capture_default_str();
  collision->add_option("--tol", co.tol, "Absolute error budget of the uq integral")->capture_default_str();
  collision->add_option("--workers", co.workers, "Worker threads")->capture_default_str();
  collision->add_option("--out", co.out, "Output CSV (default stdout)");

  GapOptions go;
  auto* gap_cmd = app.add_subcommand(
      "gap", "Gap curves log(1/p1)/log(1/p2). CSV columns: scheme,rho0,c,w,p1,p2,gap");
  gap_cmd->add_option("--scheme", go.scheme, "uq, uq-offset or both")->capture_default_str();
  gap_cmd->add_option("--rho0", go.rho0, "Comma-separated target correlations in (0,1)")->capture_default_str();
  gap_cmd->add_option("--c-range", go.c_range,
                      "Approximation factors (list or lo:hi:step); default 20 values in [1, max_c] per rho0. "
                      "Values above max_c are dropped with a warning");
  gap_cmd->add_option("--w-range", go.w_range, "Bin widths lo:hi:step")->capture_default_str();
  gap_cmd->add_option("--tol", go.tol, "Absolute error budget of the uq integral")->capture_default_str();
  gap_cmd->add_option("--workers", go.workers, "Worker threads")->capture_default_str();
  gap_cmd->add_option("--out", go.out, "Curves at fixed c varying w (default stdout)");
  gap_cmd->add_option("--by-c-out", go.by_c_out, "Same cells ordered as curves at fixed w varying c");
  gap_cmd->add_option("--summary-out", go.summary_out, "Optimal-w row per (scheme, rho0, c)");

  ValidateOptions vo;
  auto* validate = app.add_subcommand(
      "validate",
      "Monte Carlo check of one analytic collision probability; exit 1 if |z| > 4. "
      "CSV columns: scheme,rho,w,n,seed,analytic,estimate,stderr,z,verdict");
  validate->add_option("--scheme", vo.scheme, "uq or uq-offset")->capture_default_str();
  validate->add_option("--rho", vo.rho, "Correlation in [0,1]")->capture_default_str();
  validate->add_option("--w", vo.w, "Bin width")->capture_default_str();
  validate->add_option("--n", vo.n, "Sampled pairs (>= 1000)")->capture_default_str();
  validate->add_option("--seed", vo.seed, "Seed")->capture_default_str();
  validate->add_option("--tol", vo.tol, "Absolute error budget of the uq integral")->capture_default_str();
  validate->add_option("--workers", vo.workers, "Worker threads")->capture_default_str();
  validate->add_option("--out", vo.out, "Output CSV (default stdout)");

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Write a seeded Gaussian-mixture dataset and query set");
  synth->add_option("--n", so.n, "Points")->capture_default_str();
  synth->add_option("--dim", so.dim, "Dimension")->capture_default_str();
  synth->add_option("--clusters", so.clusters, "Mixture components")->capture_default_str();
  synth->add_option("--spread", so.spread, "Noise norm relative to the unit center")->capture_default_str();
  synth->add_option("--num-queries", so.num_queries, "Queries")->capture_default_str();
  synth->add_option("--seed", so.seed, "Seed")->capture_default_str();
  synth->add_option("--format", so.format, "csv or bin")->capture_default_str();
  synth->add_option("--out", so.out, "Dataset file (default stdout, csv only)");
  synth->add_option("--queries-out", so.queries_out, "Query file");

  IndexOptions io;
  auto* index = app.add_subcommand(
      "index", "Build a (K,L)-LSH index, print table,buckets,largest_bucket and optionally snapshot it");
  auto add_build_flags = [](CLI::App* cmd, IndexOptions& b) {
    cmd->add_option("--dataset", b.dataset, "Dataset file");
    cmd->add_option("--format", b.format, "csv or bin")->capture_default_str();
    cmd->add_flag("--id-column", b.id_column, "CSV rows start with an integer id");
    cmd->add_option("--K", b.K, "Hash functions per table")->capture_default_str();
    cmd->add_option("--L", b.L, "Tables")->capture_default_str();
    cmd->add_option("--scheme", b.scheme, "uq or uq-offset")->capture_default_str();
    cmd->add_option("--w", b.w, "Bin width")->capture_default_str();
    cmd->add_option("--seed", b.seed, "Ensemble seed")->capture_default_str();
  };
  add_build_flags(index, io);
  index->get_option("--dataset")->required();
  index->add_option("--out", io.out, "Snapshot file (LSHI)");

  QueryOptions qo;
  auto* query = app.add_subcommand(
      "query", "Query an index. CSV columns: query_id,num_retrieved,fraction_retrieved,retrieved_ids");
  add_build_flags(query, qo.build);
  query->add_option("--index", qo.index, "Snapshot written by 'index --out'");
  query->add_option("--queries", qo.queries, "Query file (same format as the dataset)")->required();
  query->add_option("--out", qo.out, "Output CSV (default stdout)");

  SweepOptions wo;
  auto* sweep = app.add_subcommand(
      "sweep",
      "Best fraction retrieved per (w, target recall) over (K,L). "
      "CSV columns: scheme,w,target_recall,best_fraction,achieved_recall,K,L,feasible");
  sweep->add_option("--dataset", wo.dataset, "Indexed points");
  sweep->add_option("--queries", wo.queries, "Query points (disjoint from the dataset)");
  sweep->add_option("--format", wo.format, "csv or bin")->capture_default_str();
  sweep->add_flag("--id-column", wo.id_column, "CSV rows start with an integer id");
  sweep->add_flag("--synthetic", wo.synthetic, "Use the seeded Gaussian-mixture benchmark");
  sweep->add_option("--n", wo.n, "Synthetic points")->capture_default_str();
  sweep->add_option("--dim", wo.dim, "Synthetic dimension")->capture_default_str();
  sweep->add_option("--clusters", wo.clusters, "Synthetic mixture components")->capture_default_str();
  sweep->add_option("--spread", wo.spread, "Synthetic noise norm")->capture_default_str();
  sweep->add_option("--num-queries", wo.num_queries, "Synthetic queries")->capture_default_str();
  sweep->add_option("--scheme", wo.scheme, "uq, uq-offset or both (shared projections)")->capture_default_str();
  sweep->add_option("--K-list", wo.K_list, "K values (list, lo:hi[:step] allowed)")->capture_default_str();
  sweep->add_option("--L-list", wo.L_list, "L values")->capture_default_str();
  sweep->add_option("--w-range", wo.w_range, "Bin widths (list or lo:hi:step)")->capture_default_str();
  sweep->add_option("--top-t", wo.top_t, "Neighbors defining recall")->capture_default_str();
  sweep->add_option("--target-recalls", wo.target_recalls, "Target recalls in (0,1]")->capture_default_str();
  sweep->add_option("--seed", wo.seed, "Master seed (ensembles and synthetic data)")->capture_default_str();
  sweep->add_option("--workers", wo.workers, "Worker threads")->capture_default_str();
  sweep->add_option("--gt-cache", wo.gt_cache, "Directory caching ground truth");
  sweep->add_option("--out", wo.out, "Output CSV (default stdout)");
  sweep->add_option("--cells-out", wo.cells_out, "Per-(K,L,w) CSV: scheme,K,L,w,mean_recall,mean_fraction");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (collision->parsed()) return run_collision(co, out);
    if (gap_cmd->parsed()) return run_gap(go, out, err);
    if (validate->parsed()) return run_validate(vo, out);
    if (synth->parsed()) return run_synth(so, out, err);
    if (index->parsed()) return run_index(io, out);
    if (query->parsed()) return run_query(qo, out);
    if (sweep->parsed()) return run_sweep_cmd(wo, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kIoError;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace rplsh::cli
