#include "submax/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace submax {

QuadRule gauss_legendre01(int m) {
  if (m < 1 || m > 64) throw std::invalid_argument("gauss_legendre01: m out of [1, 64]");

  // Newton iteration on the Legendre polynomial, roots on [-1, 1].
  QuadRule rule;
  rule.nodes.assign(m, 0.0);
  rule.weights.assign(m, 0.0);
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = m * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    // map [-1, 1] -> [0, 1]
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[m - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = 0.5 * w;
    rule.weights[m - 1 - i] = 0.5 * w;
  }
  return rule;
}

QuadRule composite_gauss_legendre01(int panels, int order) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre01: panels < 1");
  const QuadRule base = gauss_legendre01(order);
  QuadRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(static_cast<std::size_t>(panels) * order);
  const double width = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back((p + base.nodes[i]) * width);
      rule.weights.push_back(base.weights[i] * width);
    }
  }
  return rule;
}

}  // namespace submax
