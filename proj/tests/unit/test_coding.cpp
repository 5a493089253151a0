#include <doctest.h>

#include <cmath>
#include <limits>

#include "rplsh/coding.hpp"
#include "rplsh/errors.hpp"
#include "rplsh/rng.hpp"

using namespace rplsh;

TEST_SUITE("coding") {

TEST_CASE("uq code is the mathematical floor") {
  CHECK(code_uq(0.0, 1.0) == 0);
  CHECK(code_uq(0.999, 1.0) == 0);
  CHECK(code_uq(-0.001, 1.0) == -1);
  CHECK(code_uq(-1.0, 1.0) == -1);
  CHECK(code_uq(-1.0001, 1.0) == -2);
  CHECK(code_uq(2.9, 1.5) == 1);
  CHECK(code_uq(-2.9, 1.5) == -2);
}

TEST_CASE("a value on a bin boundary goes to the upper bin") {
  CHECK(code_uq(1.5, 1.5) == 1);
  CHECK(code_uq(-1.5, 1.5) == -1);
  CHECK(code_uq(3.0, 0.75) == 4);
  CHECK(code_uq_offset(0.5, 1.0, 0.5) == 1);
}

TEST_CASE("shifting by whole bins shifts the code") {
  // Dyadic inputs with a power-of-two width make every sum exact.
  for (double w : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (int k = -300; k <= 300; ++k) {
      const double x = k / 64.0;
      const Code base = code_uq(x, w);
      const double q = (std::abs(k) % 16) * w / 16.0;
      const Code base_q = code_uq_offset(x, w, q);
      for (int m : {-7, -1, 1, 3, 10}) {
        CHECK(code_uq(x + m * w, w) == base + m);
        CHECK(code_uq_offset(x + m * w, w, q) == base_q + m);
      }
    }
  }
}

TEST_CASE("offset code equals the uq code of the shifted value") {
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    const double x = 3.0 * rng.normal();
    const double w = 0.1 + 4.0 * rng.uniform();
    const double q = w * rng.uniform();
    CHECK(code_uq_offset(x, w, q) == code_uq(x + q, w));
  }
}

TEST_CASE("invalid coding inputs are rejected") {
  CHECK_THROWS_AS(code_uq(1.0, 0.0), InvalidParams);
  CHECK_THROWS_AS(code_uq(1.0, -1.0), InvalidParams);
  CHECK_THROWS_AS(code_uq(NAN, 1.0), InvalidParams);
  CHECK_THROWS_AS(code_uq(INFINITY, 1.0), InvalidParams);
  CHECK_THROWS_AS(code_uq(1e300, 1e-10), InvalidParams);
  CHECK_THROWS_AS(code_uq_offset(0.0, 1.0, 1.0), InvalidParams);
  CHECK_THROWS_AS(code_uq_offset(0.0, 1.0, -0.1), InvalidParams);
  CHECK_THROWS_AS((CodingParams{Scheme::uq, 0.0}.validate()), InvalidParams);
}

TEST_CASE("code_point quantizes one table of a projected point") {
  const auto e = generate_ensemble(3, 2, 3, Scheme::uq_offset, 1.0, 5);
  ProjectedPoint p{1, {0.1, -0.4, 1.3, 2.2, -3.7, 0.49}};
  const CodingParams uq{Scheme::uq, 1.0};
  CHECK(code_point(p, e, uq, 1).codes == std::vector<Code>{1, 2});
  CHECK(code_point(p, e, uq, 2).codes == std::vector<Code>{-4, 0});

  const CodingParams off{Scheme::uq_offset, 1.0};
  const auto h = code_point(p, e, off, 2);
  CHECK(h.codes[0] == code_uq_offset(-3.7, 1.0, e.offsets()[4]));
  CHECK(h.codes[1] == code_uq_offset(0.49, 1.0, e.offsets()[5]));

  CHECK_THROWS_AS(code_point(p, e, uq, 3), IndexOutOfRange);
  ProjectedPoint short_point{1, {0.1}};
  CHECK_THROWS_AS(code_point(short_point, e, uq, 0), Error);
  const auto plain = generate_ensemble(3, 2, 3, Scheme::uq, 1.0, 5);
  CHECK_THROWS_AS(code_point(p, plain, off, 0), Error);
}

}
