#include <doctest.h>

#include <cmath>
#include <vector>

#include "../oracle.hpp"
#include "rplsh/collision_model.hpp"
#include "rplsh/errors.hpp"
#include "rplsh/normal.hpp"
#include "rplsh/quadrature.hpp"

using namespace rplsh;

TEST_SUITE("normal") {

TEST_CASE("cdf reference values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.41421) == doctest::Approx(0.921350).epsilon(0).scale(1).epsilon(1e-6));
  CHECK(std::abs(normal_cdf(1.41421) - 0.921349873650178) < 1e-12);
  CHECK(normal_pdf(0.0) == doctest::Approx(0.398942280401432678).epsilon(1e-15));
}

TEST_CASE("cdf matches the long double oracle within 1e-12 everywhere") {
  double worst = 0.0;
  for (double x = -38.0; x <= 38.0; x += 0.01) {
    const double ref = static_cast<double>(oracle::cdf(x));
    worst = std::max(worst, std::abs(normal_cdf(x) - ref));
    // Relative tail error is bounded by the conditioning of erfc, about x^2 ulp.
    if (x > 0) {
      const double tail = static_cast<double>(oracle::cdf(-x));
      CHECK(std::abs(normal_sf(x) - tail) <= 1e-15 * (1.0 + x * x) * tail + 1e-320);
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("cdf symmetry") {
  for (double x = 0.0; x < 10.0; x += 0.37) CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normal_mass keeps precision in the tails") {
  const double lo = 8.0, hi = 8.5;
  const double ref = static_cast<double>(oracle::upper_tail_cf(lo) - oracle::upper_tail_cf(hi));
  CHECK(normal_mass(lo, hi) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(normal_mass(-hi, -lo) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(normal_mass(-1.0, 1.0) == doctest::Approx(0.682689492137086).epsilon(1e-14));
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  const GaussLegendreRule rule(20);
  CHECK(rule.order() == 20);
  double wsum = 0.0;
  for (double w : rule.weights()) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  const double v = rule.integrate([](double x) { return std::pow(x, 39) + 3 * std::pow(x, 38); }, 0.0, 1.0);
  CHECK(v == doctest::Approx(1.0 / 40 + 3.0 / 39).epsilon(1e-13));
  const auto r = integrate_refined(rule, [](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-13);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
}

}

TEST_SUITE("collision_model") {

// Reference values from an independent adaptive quadrature (scipy quad, epsabs 1e-13).
struct Frozen {
  double rho, w, uq, uq_offset;
};
const Frozen kFrozen[] = {
    {0.0, 1.0, 0.270892293137, 0.270903289653},   {0.25, 0.5, 0.160642602279, 0.160642602279},
    {0.5, 1.5, 0.506656254032, 0.507152684482},   {0.75, 2.0, 0.713310282797, 0.718394219584},
    {0.9, 3.0, 0.853475728963, 0.881058392257},   {0.99, 1.0, 0.887162082666, 0.887162083290},
    {0.999, 0.5, 0.928635035354, 0.928635035354}, {0.9, 1.5, 0.762092437063, 0.762178495191},
    {0.5, 4.0, 0.666542904028, 0.800532432428},
};

TEST_CASE("collision probabilities match frozen reference values") {
  for (const auto& f : kFrozen) {
    CAPTURE(f.rho);
    CAPTURE(f.w);
    CHECK(std::abs(collision_prob_uq(f.rho, f.w) - f.uq) < 1e-11);
    CHECK(std::abs(collision_prob_uq_offset(f.rho, f.w) - f.uq_offset) < 2e-12);
  }
}

TEST_CASE("stated example values") {
  CHECK(std::abs(collision_prob_uq(0.0, 1.0) - 0.27090) <= 1e-4);
  CHECK(std::abs(collision_prob_uq_offset(0.0, 2.0) - 0.48606) <= 1e-4);
  CHECK(collision_prob_uq(1.0, 0.3) == 1.0);
  CHECK(collision_prob_uq_offset(1.0, 0.3) == 1.0);
}

TEST_CASE("uq agrees with the Simpson oracle across a grid") {
  for (double rho : {0.0, 0.3, 0.6, 0.95, 0.995})
    for (double w : {0.3, 1.0, 2.5, 6.0}) {
      CAPTURE(rho);
      CAPTURE(w);
      CHECK(std::abs(collision_prob_uq(rho, w) - static_cast<double>(oracle::uq(rho, w))) < 1e-9);
    }
}

TEST_CASE("uq-offset agrees with the long double closed form") {
  for (double rho = 0.0; rho < 1.0; rho += 0.07)
    for (double w = 0.1; w < 12.0; w *= 1.7)
      CHECK(std::abs(collision_prob_uq_offset(rho, w) - static_cast<double>(oracle::uq_offset(rho, w))) < 1e-13);
}

TEST_CASE("adaptive quadrature at rho = 0 reproduces the closed form") {
  for (double w : {0.5, 1.0, 2.0, 4.0}) {
    const auto r = integrate_collision_uq(0.0, w, kDefaultTolerance);
    CHECK(r.converged);
    CHECK(std::abs(r.value - collision_prob_uq_uncorrelated(w)) < 1e-8);
    CHECK(std::abs(collision_prob_uq_uncorrelated(w) - static_cast<double>(oracle::uq_uncorrelated(w))) < 1e-12);
  }
}

TEST_CASE("halving the step changes the uq integral by less than tol") {
  for (double rho : {0.0, 0.5, 0.9, 0.99, 0.9999})
    for (double w : {0.5, 1.5, 4.0}) {
      const auto r = integrate_collision_uq(rho, w, kDefaultTolerance);
      REQUIRE(r.converged);
      const double finer = integrate_collision_uq_fixed(rho, w, r.bins, 2 * r.max_panels);
      CAPTURE(rho);
      CAPTURE(w);
      CHECK(std::abs(finer - r.value) < kDefaultTolerance);
    }
}

TEST_CASE("uq limit for wide bins at rho = 0") {
  const double p = collision_prob_uq(0.0, 50.0);
  CHECK(p <= 0.5);
  CHECK(p >= 0.5 - 1e-6);
}

TEST_CASE("uq-offset approaches 1 at rate sqrt(2d/pi)/w") {
  for (double rho : {0.0, 0.5, 0.9}) {
    const double d = 2.0 * (1.0 - rho);
    double prev = 0.0;
    for (double w : {50.0, 200.0, 1000.0, 1e5}) {
      const double p = collision_prob_uq_offset(rho, w);
      CHECK(p > prev);
      prev = p;
      CHECK(w * (1.0 - p) == doctest::Approx(std::sqrt(2.0 * d / M_PI)).epsilon(2.0 * d / (w * w) + 1e-9));
    }
  }
}

TEST_CASE("both probabilities increase strictly in rho") {
  for (double w : {0.25, 0.5, 1.5, 3.0, 8.0}) {
    double pu = 0.0, po = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double rho = 0.999 * i / 49.0;
      const double u = collision_prob_uq(rho, w);
      const double o = collision_prob_uq_offset(rho, w);
      CHECK(u > pu - 1e-12);
      CHECK(o > po - 1e-12);
      if (i > 0) CHECK(u > pu);
      pu = u;
      po = o;
    }
  }
}

TEST_CASE("both probabilities are nondecreasing in w") {
  for (double rho : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    double pu = 0.0, po = 0.0;
    for (double w = 0.25; w <= 8.0; w += 0.25) {
      const double u = collision_prob_uq(rho, w);
      const double o = collision_prob_uq_offset(rho, w);
      CHECK(u >= pu - 1e-12);
      CHECK(o >= po - 1e-12);
      pu = u;
      po = o;
    }
  }
}

TEST_CASE("uq collides less often than uq-offset for wide bins at rho = 0") {
  for (double w = 2.25; w <= 5.0; w += 0.25) CHECK(collision_prob_uq_offset(0.0, w) >= collision_prob_uq(0.0, w));
}

TEST_CASE("invalid collision inputs are rejected") {
  CHECK_THROWS_AS(collision_prob_uq(-0.1, 1.0), InvalidParams);
  CHECK_THROWS_AS(collision_prob_uq(1.1, 1.0), InvalidParams);
  CHECK_THROWS_AS(collision_prob_uq(0.5, 0.0), InvalidParams);
  CHECK_THROWS_AS(collision_prob_uq(0.5, 1.0, 0.0), InvalidParams);
  CHECK_THROWS_AS(collision_prob_uq_offset(0.5, -1.0), InvalidParams);
  CHECK_THROWS_AS(collision_prob_uq_offset(NAN, 1.0), InvalidParams);
  CHECK(CollisionQuery{Scheme::uq, 0.75, 1.0}.distance() == 0.5);
  CHECK(collision_prob(CollisionQuery{Scheme::uq_offset, 0.5, 2.0}) == collision_prob_uq_offset(0.5, 2.0));
}

TEST_CASE("gap definition") {
  CHECK(gap(0.5, 0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gap(0.9, 0.9) == 1.0);
  CHECK_THROWS_AS(gap(1.0, 0.5), DegenerateGap);
  CHECK_THROWS_AS(gap(0.5, 0.0), DegenerateGap);
  CHECK_THROWS_AS(gap(0.5, 1.0), DegenerateGap);
}

TEST_CASE("admissible approximation factor") {
  CHECK(max_c(0.9) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
  CHECK(max_c(0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(max_c(0.0) == 1.0);
  CHECK_THROWS_AS(max_c(1.0), InvalidParams);
  CHECK(far_correlation(0.9, 1.0) == 0.9);
  CHECK(far_correlation(0.9, max_c(0.9)) == 0.0);
}

TEST_CASE("gap_at") {
  for (auto s : {Scheme::uq, Scheme::uq_offset}) {
    const auto one = gap_at(s, 0.9, 1.0, 1.5);
    CHECK(one.p1 == one.p2);
    CHECK(one.gap == 1.0);
    CHECK_THROWS_AS(gap_at(s, 0.5, 1.5, 2.0), CExceedsBound);
    CHECK_THROWS_AS(gap_at(s, 0.0, 1.0, 2.0), InvalidParams);
    CHECK_THROWS_AS(gap_at(s, 0.5, 0.9, 2.0), InvalidParams);
  }
  const auto r = gap_at(Scheme::uq_offset, 0.9, 1.2, 1.5);
  CHECK(r.p1 > r.p2);
  CHECK(r.p1 == collision_prob_uq_offset(0.9, 1.5));
  CHECK(r.p2 == collision_prob_uq_offset(1.0 - 1.44 * 0.1, 1.5));
  CHECK(r.gap == std::log(1.0 / r.p1) / std::log(1.0 / r.p2));
  // Reference p1 from the frozen table above; p2 at rho = 0.856 from the same quadrature.
  const auto u = gap_at(Scheme::uq, 0.9, 1.2, 1.5);
  CHECK(std::abs(u.p1 - 0.762092437063) < 2e-12);
  CHECK(u.gap < r.gap);
  // At max_c the far point is uncorrelated.
  const auto edge = gap_at(Scheme::uq, 0.9, max_c(0.9), 1.0);
  CHECK(std::abs(edge.p2 - 0.270892293137) < 2e-12);
}

TEST_CASE("optimal_w") {
  const std::vector<double> single{1.75};
  CHECK(optimal_w(Scheme::uq, 0.9, 1.5, single).w == 1.75);
  // c = 1 gives gap 1 everywhere: the tie goes to the smallest w.
  const auto grid = default_w_grid();
  CHECK(grid.size() == 32);
  CHECK(grid.front() == 0.25);
  CHECK(grid.back() == 8.0);
  CHECK(optimal_w(Scheme::uq_offset, 0.9, 1.0, grid).w == 0.25);
  const auto best = optimal_w(Scheme::uq, 0.5, 1.3, grid);
  CHECK(best.w >= 2.0);
  for (double w : grid) CHECK(best.result.gap <= gap_at(Scheme::uq, 0.5, 1.3, w).gap);
  const std::vector<double> unsorted{2.0, 1.0};
  CHECK_THROWS_AS(optimal_w(Scheme::uq, 0.5, 1.3, unsorted), InvalidParams);
  CHECK_THROWS_AS(optimal_w(Scheme::uq, 0.5, 1.3, std::vector<double>{}), InvalidParams);
}

TEST_CASE("make_range") {
  const auto r = make_range(0.5, 5.0, 0.5);
  CHECK(r.size() == 10);
  CHECK(r.back() == 5.0);
  CHECK(make_range(1.0, 1.0, 0.1).size() == 1);
  CHECK_THROWS_AS(make_range(1.0, 0.0, 0.5), InvalidParams);
  CHECK_THROWS_AS(make_range(0.0, 1.0, 0.0), InvalidParams);
}

TEST_CASE("Monte Carlo estimator agrees with the closed forms") {
  const auto u = monte_carlo_collision(Scheme::uq, 0.0, 1.0, 400000, 3);
  CHECK(std::abs(u.estimate - 0.270892293137) <= 4.0 * u.std_error);
  CHECK(u.trials == 400000);
  CHECK(u.std_error == doctest::Approx(std::sqrt(u.estimate * (1 - u.estimate) / 400000)).epsilon(1e-12));
  const auto o = monte_carlo_collision(Scheme::uq_offset, 0.0, 2.0, 400000, 3);
  CHECK(std::abs(o.estimate - 0.486064958) <= 4.0 * o.std_error);
  const auto one = monte_carlo_collision(Scheme::uq, 1.0, 0.7, 5000, 3);
  CHECK(one.estimate == 1.0);
  CHECK(one.std_error == 0.0);
  CHECK_THROWS_AS(monte_carlo_collision(Scheme::uq, 0.5, 1.0, 999, 3), InvalidParams);
}

TEST_CASE("Monte Carlo estimate does not depend on the worker count") {
  const auto a = monte_carlo_collision(Scheme::uq_offset, 0.5, 1.5, 300000, 9, 1);
  const auto b = monte_carlo_collision(Scheme::uq_offset, 0.5, 1.5, 300000, 9, 3);
  CHECK(a.collisions == b.collisions);
  CHECK(a.estimate == b.estimate);
}

TEST_CASE("curve_sweep matches direct calls in scheme, rho, w order") {
  const Scheme schemes[] = {Scheme::uq, Scheme::uq_offset};
  const double rhos[] = {0.0, 0.9};
  const double ws[] = {1.0, 2.0, 3.0};
  const auto rows = curve_sweep(schemes, rhos, ws, kDefaultTolerance, 2);
  REQUIRE(rows.size() == 12);
  std::size_t k = 0;
  for (auto s : schemes)
    for (double rho : rhos)
      for (double w : ws) {
        CHECK(rows[k].scheme == s);
        CHECK(rows[k].rho == rho);
        CHECK(rows[k].w == w);
        CHECK(rows[k].p == collision_prob(s, rho, w));
        ++k;
      }
}

TEST_CASE("gap_grid drops inadmissible c with a warning") {
  const Scheme schemes[] = {Scheme::uq, Scheme::uq_offset};
  const double rho0s[] = {0.5};
  const double cs[] = {1.2, 2.0};
  const double ws[] = {1.0, 2.0};
  const auto g = gap_grid(schemes, rho0s, cs, ws);
  CHECK(g.cells.size() == 4);
  CHECK(g.optimal.size() == 2);
  REQUIRE(g.warnings.size() == 1);
  CHECK(g.warnings[0].find("c=2") != std::string::npos);
}

}
