#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace rplsh {

/// Gauss-Legendre nodes and weights on [-1, 1], found by Newton iteration on P_n.
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(std::size_t order);

  std::size_t order() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Composite rule: [a, b] split into `panels` equal panels.
  template <class F>
  double integrate(F&& f, double a, double b, std::size_t panels = 1) const {
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = a + h * static_cast<double>(p);
      const double mid = lo + 0.5 * h;
      double sum = 0.0;
      for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * f(mid + 0.5 * h * nodes_[k]);
      total += 0.5 * h * sum;
    }
    return total;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// The shared order-20 rule.
const GaussLegendreRule& default_rule();

struct QuadratureResult {
  double value = 0.0;
  double change = 0.0;  ///< |last refinement - previous|
  std::size_t panels = 1;
  bool converged = false;
};

/// Doubles the panel count of the composite rule until two successive estimates differ by
/// less than `tol`, or `max_panels` is reached.
template <class F>
QuadratureResult integrate_refined(const GaussLegendreRule& rule, F&& f, double a, double b, double tol,
                                   std::size_t max_panels = 4096) {
  QuadratureResult r;
  r.value = rule.integrate(f, a, b, 1);
  for (std::size_t panels = 2; panels <= max_panels; panels *= 2) {
    const double next = rule.integrate(f, a, b, panels);
    r.change = std::abs(next - r.value);
    r.value = next;
    r.panels = panels;
    if (r.change < tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

}  // namespace rplsh
