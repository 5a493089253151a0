#pragma once

namespace rplsh {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal distribution function, computed as erfc(-x / sqrt(2)) / 2.
double normal_cdf(double x);

/// Upper tail 1 - normal_cdf(x) without cancellation.
double normal_sf(double x);

/// P(lo < Z < hi) for Z ~ N(0, 1). Uses whichever tail avoids cancellation.
double normal_mass(double lo, double hi);

}  // namespace rplsh
