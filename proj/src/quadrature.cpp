#include "rplsh/quadrature.hpp"

#include <numbers>

#include "rplsh/errors.hpp"

namespace rplsh {

GaussLegendreRule::GaussLegendreRule(std::size_t order) {
  if (order == 0) throw InvalidParams("quadrature order must be positive");
  nodes_.resize(order);
  weights_.resize(order);
  const double n = static_cast<double>(order);
  // Roots are symmetric; solve for the upper half and mirror.
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[order - 1 - i] = x;
    weights_[i] = w;
    weights_[order - 1 - i] = w;
  }
  if (order % 2 == 1) nodes_[order / 2] = 0.0;
}

const GaussLegendreRule& default_rule() {
  static const GaussLegendreRule rule(20);
  return rule;
}

}  // namespace rplsh
