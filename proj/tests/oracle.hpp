#pragma once

// Independent reference implementations used only by the tests. Nothing here calls the
// library: the normal cdf is a long-double series / continued fraction, and P_uq is a
// composite Simpson rule on a fixed grid.

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace oracle {

inline long double pdf(long double x) {
  return std::exp(-x * x / 2.0L) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
}

/// Upper tail for x > 0 by backward evaluation of the continued fraction
/// Q(x) = pdf(x) / (x + 1/(x + 2/(x + 3/(x + ...)))).
inline long double upper_tail_cf(long double x) {
  long double t = x;
  for (int k = 400; k >= 1; --k) t = x + k / t;
  return pdf(x) / t;
}

/// Phi(x) = 1/2 + pdf(x) * sum x^(2n+1) / (1*3*...*(2n+1)).
inline long double cdf_series(long double x) {
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 2000; ++n) {
    term *= x * x / (2 * n + 1);
    sum += term;
    if (std::fabs(term) < 1e-24L * std::fabs(sum)) break;
  }
  return 0.5L + pdf(x) * sum;
}

inline long double cdf(long double x) {
  if (x > 3.0L) return 1.0L - upper_tail_cf(x);
  if (x < -3.0L) return upper_tail_cf(-x);
  return cdf_series(x);
}

/// 2 * sum_i (Phi((i+1)w) - Phi(iw))^2 until the bins carry no mass.
inline long double uq_uncorrelated(long double w) {
  long double sum = 0.0L;
  for (int i = 0; i * w < 40.0L; ++i) {
    const long double m = cdf((i + 1) * w) - cdf(i * w);
    sum += m * m;
  }
  return 2.0L * sum;
}

inline long double uq_offset(long double rho, long double w) {
  const long double d = 2.0L * (1.0L - rho);
  if (d == 0.0L) return 1.0L;
  const long double t = w / std::sqrt(d);
  return 2.0L * cdf(t) - 1.0L - 2.0L / (std::sqrt(2.0L * 3.14159265358979323846264338327950288L) * t) *
                                     (1.0L - std::exp(-t * t / 2.0L));
}

/// P_uq by composite Simpson over each bin [iw, (i+1)w) up to z = 12. The step count per
/// bin grows with w / s so the inner cdf transition (width ~s) is always resolved.
inline long double uq(long double rho, long double w) {
  if (rho >= 1.0L) return 1.0L;
  const long double s = std::sqrt((1.0L - rho) * (1.0L + rho));
  const int steps = 2 * static_cast<int>(std::ceil(std::max(200.0L, 100.0L * w / s)));
  long double total = 0.0L;
  for (int i = 0; i * w < 12.0L; ++i) {
    const long double a = i * w;
    const long double b = (i + 1) * w;
    auto f = [&](long double z) { return pdf(z) * (cdf((b - rho * z) / s) - cdf((a - rho * z) / s)); };
    const long double h = (b - a) / steps;
    long double acc = f(a) + f(b);
    for (int k = 1; k < steps; ++k) acc += (k % 2 ? 4.0L : 2.0L) * f(a + k * h);
    total += acc * h / 3.0L;
  }
  return 2.0L * total;
}

}  // namespace oracle
