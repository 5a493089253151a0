#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rplsh/scheme.hpp"

namespace rplsh {

/// Absolute error budget used when a caller does not pass one.
inline constexpr double kDefaultTolerance = 1e-10;

struct CollisionQuery {
  Scheme scheme = Scheme::uq;
  double rho = 0.0;  ///< correlation in [0, 1]
  double w = 1.0;
  double tol = kDefaultTolerance;

  /// Squared Euclidean distance 2 (1 - rho) between unit vectors.
  double distance() const { return 2.0 * (1.0 - rho); }
  void validate() const;
};

/// Pr(floor(x/w) == floor(y/w)) for (x, y) standard bivariate normal with correlation rho.
///
/// Evaluated as 2 * sum_{i>=0} int_{iw}^{(i+1)w} phi(z) [Phi(((i+1)w - rho z)/s) - Phi((iw - rho z)/s)] dz,
/// s = sqrt(1 - rho^2), with order-20 Gauss-Legendre panels refined per bin and the sum cut once
/// the Gaussian tail beyond the last bin is below tol/10. rho == 0 uses the closed form
/// 2 sum [Phi((i+1)w) - Phi(iw)]^2 and rho > 1 - 1e-9 returns 1.
double collision_prob_uq(double rho, double w, double tol = kDefaultTolerance);

/// Pr(floor((x+q)/w) == floor((y+q)/w)), q ~ uniform[0, w):
/// with d = 2 (1 - rho), t = w / sqrt(d): 2 Phi(t) - 1 - 2 / (sqrt(2 pi) t) (1 - exp(-t^2/2)).
double collision_prob_uq_offset(double rho, double w);

double collision_prob(Scheme scheme, double rho, double w, double tol = kDefaultTolerance);
double collision_prob(const CollisionQuery& q);

/// Closed form at rho = 0, summed until the remaining mass is below tol.
double collision_prob_uq_uncorrelated(double w, double tol = kDefaultTolerance);

/// Quadrature internals of collision_prob_uq, exposed for refinement checks.
struct UqIntegration {
  double value = 0.0;
  std::size_t bins = 0;        ///< number of bins [iw, (i+1)w) summed
  std::size_t max_panels = 0;  ///< largest panel count any bin needed
  bool converged = true;
};
/// Adaptive path, used for every rho (including 0) without special cases.
UqIntegration integrate_collision_uq(double rho, double w, double tol);
/// Fixed number of bins and panels per bin.
double integrate_collision_uq_fixed(double rho, double w, std::size_t bins, std::size_t panels);

/// Largest admissible approximation factor sqrt(1 / (1 - rho0)) for target correlation rho0.
double max_c(double rho0);

/// log(1/p1) / log(1/p2). Throws DegenerateGap unless both probabilities lie in (0, 1).
double gap(double p1, double p2);

struct GapResult {
  Scheme scheme = Scheme::uq;
  double rho0 = 0.0;
  double c = 1.0;
  double w = 1.0;
  double p1 = 0.0;  ///< collision probability at distance d0 = 2 (1 - rho0)
  double p2 = 0.0;  ///< collision probability at distance c^2 d0
  double gap = 1.0;
};

/// Correlation at squared distance c^2 d0: 1 - c^2 (1 - rho0). Exactly rho0 when c == 1.
double far_correlation(double rho0, double c);

/// Throws InvalidParams unless 0 < rho0 < 1 and c >= 1, CExceedsBound if c > max_c(rho0), and
/// DegenerateGap if either probability is 0 or 1 in double precision.
GapResult gap_at(Scheme scheme, double rho0, double c, double w, double tol = kDefaultTolerance);

struct OptimalW {
  double w = 0.0;
  GapResult result;
  std::size_t skipped = 0;  ///< grid points with an undefined gap
};

/// Grid point minimizing the gap; ties go to the smaller w. Grid points where the gap is
/// undefined are skipped; if none remain DegenerateGap is thrown.
OptimalW optimal_w(Scheme scheme, double rho0, double c, std::span<const double> w_grid,
                   double tol = kDefaultTolerance);

/// Default bin-width grid 0.25, 0.5, ..., 8.
std::vector<double> default_w_grid();

/// lo, lo+step, ... up to hi (inclusive within 1e-9 * step). Throws InvalidParams.
std::vector<double> make_range(double lo, double hi, double step);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t collisions = 0;
  std::uint64_t trials = 0;
};

/// Fraction of sampled correlated pairs whose codes agree, with binomial standard error.
/// uq-offset draws a fresh offset per pair. Pairs are generated in fixed-size shards seeded
/// by derive_seed(seed, shard), so the result does not depend on `workers`. Needs n >= 1000.
McEstimate monte_carlo_collision(Scheme scheme, double rho, double w, std::uint64_t n, std::uint64_t seed,
                                 std::size_t workers = 1);

struct CurveRow {
  Scheme scheme = Scheme::uq;
  double rho = 0.0;
  double w = 0.0;
  double p = 0.0;
};

/// Rows ordered by scheme, then rho, then w.
std::vector<CurveRow> curve_sweep(std::span<const Scheme> schemes, std::span<const double> rhos,
                                  std::span<const double> w_grid, double tol = kDefaultTolerance,
                                  std::size_t workers = 1);

struct GapGrid {
  std::vector<GapResult> cells;    ///< every valid (scheme, rho0, c, w), in that order
  std::vector<GapResult> optimal;  ///< one per (scheme, rho0, c): the optimal-w cell
  std::vector<std::string> warnings;
};

/// Gap table over rho0 x c x w for each scheme. c values above max_c(rho0) and w values with an
/// undefined gap are left out and reported in `warnings`.
GapGrid gap_grid(std::span<const Scheme> schemes, std::span<const double> rho0s, std::span<const double> cs,
                 std::span<const double> w_grid, double tol = kDefaultTolerance, std::size_t workers = 1);

/// Header `scheme,rho,w,p`.
void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows);
/// Header `scheme,rho0,c,w,p1,p2,gap`.
void write_gap_csv(std::ostream& out, std::span<const GapResult> rows);

}  // namespace rplsh
