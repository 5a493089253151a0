#include "rplsh/collision_model.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>

#include "rplsh/coding.hpp"
#include "rplsh/csv.hpp"
#include "rplsh/errors.hpp"
#include "rplsh/normal.hpp"
#include "rplsh/parallel.hpp"
#include "rplsh/projections.hpp"
#include "rplsh/quadrature.hpp"
#include "rplsh/rng.hpp"

namespace rplsh {
namespace {

// Above this correlation the pair is treated as identical.
constexpr double kRhoOne = 1.0 - 1e-9;
// Slack when comparing c against max_c so that c = max_c(rho0) computed in double passes.
constexpr double kBoundSlack = 1e-12;
constexpr std::uint64_t kShardSize = 1ULL << 16;
constexpr std::size_t kMaxPanels = 1 << 14;

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidParams("rho must lie in [0, 1]");
}

void check_w(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidParams("bin width must be positive and finite");
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw InvalidParams("tolerance must be positive");
}

// Smallest bin count I >= 1 whose tail mass 2 (1 - Phi(I w)) is below tol / 10.
std::size_t bins_for(double w, double tol) {
  std::size_t bins = 1;
  while (2.0 * normal_sf(static_cast<double>(bins) * w) >= tol / 10.0) ++bins;
  return bins;
}

struct BinIntegrand {
  double lo;
  double hi;
  double rho;
  double s;
  double operator()(double z) const {
    return normal_pdf(z) * normal_mass((lo - rho * z) / s, (hi - rho * z) / s);
  }
};

}  // namespace

void CollisionQuery::validate() const {
  check_rho(rho);
  check_w(w);
  check_tol(tol);
}

double collision_prob_uq_uncorrelated(double w, double tol) {
  check_w(w);
  check_tol(tol);
  const std::size_t bins = bins_for(w, tol);
  double sum = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double m = normal_mass(static_cast<double>(i) * w, static_cast<double>(i + 1) * w);
    sum += m * m;
  }
  return 2.0 * sum;
}

UqIntegration integrate_collision_uq(double rho, double w, double tol) {
  check_rho(rho);
  check_w(w);
  check_tol(tol);
  UqIntegration out;
  if (rho > kRhoOne) {
    out.value = 1.0;
    return out;
  }
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  out.bins = bins_for(w, tol);
  const double bin_tol = tol / (4.0 * static_cast<double>(out.bins));
  double sum = 0.0;
  for (std::size_t i = 0; i < out.bins; ++i) {
    const BinIntegrand f{static_cast<double>(i) * w, static_cast<double>(i + 1) * w, rho, s};
    const auto r = integrate_refined(default_rule(), f, f.lo, f.hi, bin_tol, kMaxPanels);
    sum += r.value;
    out.max_panels = std::max(out.max_panels, r.panels);
    out.converged = out.converged && r.converged;
  }
  out.value = 2.0 * sum;
  return out;
}

double integrate_collision_uq_fixed(double rho, double w, std::size_t bins, std::size_t panels) {
  check_rho(rho);
  check_w(w);
  if (bins == 0 || panels == 0) throw InvalidParams("bins and panels must be positive");
  if (rho > kRhoOne) return 1.0;
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  double sum = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const BinIntegrand f{static_cast<double>(i) * w, static_cast<double>(i + 1) * w, rho, s};
    sum += default_rule().integrate(f, f.lo, f.hi, panels);
  }
  return 2.0 * sum;
}

double collision_prob_uq(double rho, double w, double tol) {
  check_rho(rho);
  check_w(w);
  check_tol(tol);
  if (rho > kRhoOne) return 1.0;
  if (rho == 0.0) return collision_prob_uq_uncorrelated(w, tol);
  return integrate_collision_uq(rho, w, tol).value;
}

double collision_prob_uq_offset(double rho, double w) {
  check_rho(rho);
  check_w(w);
  const double d = 2.0 * (1.0 - rho);
  if (d == 0.0) return 1.0;
  const double t = w / std::sqrt(d);
  // 2 Phi(t) - 1 == erf(t / sqrt 2); 1 - exp(-t^2/2) == -expm1(-t^2/2).
  return std::erf(t / std::numbers::sqrt2) -
         2.0 / (std::sqrt(2.0 * std::numbers::pi) * t) * -std::expm1(-0.5 * t * t);
}

double collision_prob(Scheme scheme, double rho, double w, double tol) {
  return scheme == Scheme::uq ? collision_prob_uq(rho, w, tol) : collision_prob_uq_offset(rho, w);
}

double collision_prob(const CollisionQuery& q) {
  q.validate();
  return collision_prob(q.scheme, q.rho, q.w, q.tol);
}

double max_c(double rho0) {
  if (!(rho0 >= 0.0 && rho0 < 1.0)) throw InvalidParams("rho0 must lie in [0, 1)");
  return std::sqrt(1.0 / (1.0 - rho0));
}

double gap(double p1, double p2) {
  if (!(p1 > 0.0 && p1 < 1.0) || !(p2 > 0.0 && p2 < 1.0))
    throw DegenerateGap("gap undefined: collision probabilities must lie strictly inside (0, 1), got p1=" +
                        format_real(p1) + " p2=" + format_real(p2));
  return std::log(1.0 / p1) / std::log(1.0 / p2);
}

double far_correlation(double rho0, double c) {
  if (c == 1.0) return rho0;
  const double rho = 1.0 - c * c * (1.0 - rho0);
  return (rho < 0.0 && rho > -1e-9) ? 0.0 : rho;
}

GapResult gap_at(Scheme scheme, double rho0, double c, double w, double tol) {
  if (!(rho0 > 0.0 && rho0 < 1.0)) throw InvalidParams("rho0 must lie in (0, 1)");
  if (!(c >= 1.0)) throw InvalidParams("approximation factor c must be >= 1");
  check_w(w);
  const double bound = max_c(rho0);
  if (c > bound * (1.0 + kBoundSlack))
    throw CExceedsBound("c=" + format_real(c) + " exceeds max_c=" + format_real(bound) +
                        " for rho0=" + format_real(rho0));
  GapResult r;
  r.scheme = scheme;
  r.rho0 = rho0;
  r.c = c;
  r.w = w;
  r.p1 = collision_prob(scheme, rho0, w, tol);
  r.p2 = c == 1.0 ? r.p1 : collision_prob(scheme, std::max(0.0, far_correlation(rho0, c)), w, tol);
  r.gap = gap(r.p1, r.p2);
  return r;
}

OptimalW optimal_w(Scheme scheme, double rho0, double c, std::span<const double> w_grid, double tol) {
  if (w_grid.empty()) throw InvalidParams("w grid is empty");
  for (std::size_t i = 0; i < w_grid.size(); ++i) {
    if (!(w_grid[i] > 0.0)) throw InvalidParams("w grid values must be positive");
    if (i > 0 && !(w_grid[i] > w_grid[i - 1])) throw InvalidParams("w grid must be strictly increasing");
  }
  std::optional<OptimalW> best;
  std::size_t skipped = 0;
  for (double w : w_grid) {
    GapResult r;
    try {
      r = gap_at(scheme, rho0, c, w, tol);
    } catch (const DegenerateGap&) {
      ++skipped;
      continue;
    }
    if (!best || r.gap < best->result.gap) best = OptimalW{w, r, 0};
  }
  if (!best) throw DegenerateGap("gap undefined at every grid point");
  best->skipped = skipped;
  return *best;
}

std::vector<double> make_range(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
    throw InvalidParams("range needs finite lo <= hi and step > 0");
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (v > hi + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

std::vector<double> default_w_grid() { return make_range(0.25, 8.0, 0.25); }

McEstimate monte_carlo_collision(Scheme scheme, double rho, double w, std::uint64_t n, std::uint64_t seed,
                                 std::size_t workers) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw InvalidParams("rho must lie in [-1, 1]");
  check_w(w);
  if (n < 1000) throw InvalidParams("Monte Carlo needs n >= 1000");

  const std::uint64_t shards = (n + kShardSize - 1) / kShardSize;
  std::vector<std::uint64_t> hits(shards, 0);
  parallel_for(shards, workers, [&](std::size_t shard) {
    const std::uint64_t begin = shard * kShardSize;
    const std::uint64_t count = std::min(kShardSize, n - begin);
    const std::uint64_t shard_seed = derive_seed(seed, shard);
    const auto pairs = sample_correlated_pair(rho, count, shard_seed);
    std::uint64_t h = 0;
    if (scheme == Scheme::uq) {
      for (const auto& p : pairs) h += code_uq(p.x, w) == code_uq(p.y, w);
    } else {
      Rng offsets(derive_seed(shard_seed, 1));
      for (const auto& p : pairs) {
        double q = offsets.uniform() * w;
        if (q >= w) q = std::nextafter(w, 0.0);
        h += code_uq_offset(p.x, w, q) == code_uq_offset(p.y, w, q);
      }
    }
    hits[shard] = h;
  });

  McEstimate e;
  e.trials = n;
  for (auto h : hits) e.collisions += h;
  e.estimate = static_cast<double>(e.collisions) / static_cast<double>(n);
  e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n));
  return e;
}

std::vector<CurveRow> curve_sweep(std::span<const Scheme> schemes, std::span<const double> rhos,
                                  std::span<const double> w_grid, double tol, std::size_t workers) {
  for (double rho : rhos) check_rho(rho);
  for (double w : w_grid) check_w(w);
  check_tol(tol);
  std::vector<CurveRow> rows;
  for (Scheme s : schemes)
    for (double rho : rhos)
      for (double w : w_grid) rows.push_back({s, rho, w, 0.0});
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    auto& r = rows[i];
    r.p = collision_prob(r.scheme, r.rho, r.w, tol);
  });
  return rows;
}

GapGrid gap_grid(std::span<const Scheme> schemes, std::span<const double> rho0s, std::span<const double> cs,
                 std::span<const double> w_grid, double tol, std::size_t workers) {
  for (double w : w_grid) check_w(w);
  check_tol(tol);
  GapGrid out;

  struct Cell {
    Scheme scheme;
    double rho0;
    double c;
    double w;
    std::optional<GapResult> result;
  };
  struct Group {
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Cell> cells;
  std::vector<Group> groups;
  for (Scheme s : schemes) {
    for (double rho0 : rho0s) {
      if (!(rho0 > 0.0 && rho0 < 1.0)) throw InvalidParams("rho0 must lie in (0, 1)");
      const double bound = max_c(rho0);
      for (double c : cs) {
        if (!(c >= 1.0)) throw InvalidParams("approximation factor c must be >= 1");
        if (c > bound * (1.0 + kBoundSlack)) {
          if (s == schemes.front())
            out.warnings.push_back("rho0=" + format_real(rho0) + " c=" + format_real(c) +
                                   " excluded: exceeds max_c=" + format_real(bound));
          continue;
        }
        const std::size_t begin = cells.size();
        for (double w : w_grid) cells.push_back({s, rho0, c, w, std::nullopt});
        groups.push_back({begin, cells.size()});
      }
    }
  }

  parallel_for(cells.size(), workers, [&](std::size_t i) {
    auto& cell = cells[i];
    try {
      cell.result = gap_at(cell.scheme, cell.rho0, cell.c, cell.w, tol);
    } catch (const DegenerateGap&) {
      cell.result.reset();
    }
  });

  for (const auto& g : groups) {
    const GapResult* best = nullptr;
    for (std::size_t i = g.begin; i < g.end; ++i) {
      const auto& cell = cells[i];
      if (!cell.result) {
        out.warnings.push_back(std::string(to_string(cell.scheme)) + " rho0=" + format_real(cell.rho0) +
                               " c=" + format_real(cell.c) + " w=" + format_real(cell.w) +
                               " skipped: gap undefined (collision probability rounds to 0 or 1)");
        continue;
      }
      out.cells.push_back(*cell.result);
      if (!best || cell.result->gap < best->gap) best = &*cell.result;
    }
    if (best) out.optimal.push_back(*best);
  }
  return out;
}

void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows) {
  out << "scheme,rho,w,p\n";
  for (const auto& r : rows)
    out << to_string(r.scheme) << ',' << format_real(r.rho) << ',' << format_real(r.w) << ','
        << format_real(r.p) << '\n';
}

void write_gap_csv(std::ostream& out, std::span<const GapResult> rows) {
  out << "scheme,rho0,c,w,p1,p2,gap\n";
  for (const auto& r : rows)
    out << to_string(r.scheme) << ',' << format_real(r.rho0) << ',' << format_real(r.c) << ','
        << format_real(r.w) << ',' << format_real(r.p1) << ',' << format_real(r.p2) << ','
        << format_real(r.gap) << '\n';
}

}  // namespace rplsh
