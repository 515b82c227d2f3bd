#include "submax/boosting.hpp"

#include <cmath>
#include <stdexcept>

namespace submax {

double boost_scale(double gamma) {
  if (gamma < 1e-8) return 1.0 - 0.5 * gamma;
  return -std::expm1(-gamma) / gamma;
}

BoostConstants boost_constants(const ObjectiveMeta& meta, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("boost_constants: c must be positive");
  const double g = meta.gamma;
  const double r_sq = meta.radius_x * meta.radius_x;

  BoostConstants bc;
  bc.scale = boost_scale(g);
  if (g < 1e-4) {
    // 2-term series around g = 0
    bc.l_gamma = meta.L * (0.5 - g / 6.0);
    bc.sigma_gamma_sq = 2.0 * bc.scale * bc.scale * meta.sigma * meta.sigma +
                        2.0 * meta.L * meta.L * r_sq * (2.0 - 2.0 * g) / 3.0;
  } else {
    bc.l_gamma = meta.L * (g + std::expm1(-g)) / (g * g);
    bc.sigma_gamma_sq = 2.0 * bc.scale * bc.scale * meta.sigma * meta.sigma +
                        2.0 * meta.L * meta.L * r_sq * (-std::expm1(-2.0 * g)) / (3.0 * g);
  }
  bc.tau = std::max(1.0 / g, meta.L * r_sq / c);
  return bc;
}

double z_from_uniform(double gamma, double p) {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("z_from_uniform: gamma must lie in (0, 1]");
  if (gamma < 1e-8) return p;
  // CDF(z) = (e^{g(z-1)} - e^-g) / (1 - e^-g); inverting and factoring e^-g
  // out of the logarithm keeps the expression stable for small gamma
  return std::log1p(p * std::expm1(gamma)) / gamma;
}

double sample_z(double gamma, RngStream& rng) { return z_from_uniform(gamma, rng.uniform01()); }

Vec boost_grad(const Objective& obj, const Vec& x, const BoostConfig& cfg, RngStream& rng) {
  if (cfg.batch < 1) throw std::invalid_argument("boost_grad: batch must be >= 1");
  const double scale = boost_scale(cfg.gamma);
  Vec acc(x.size(), 0.0);
  Vec zx(x.size());
  for (int b = 0; b < cfg.batch; ++b) {
    const double z = sample_z(cfg.gamma, rng);
    for (std::size_t i = 0; i < x.size(); ++i) zx[i] = z * x[i];
    axpy(scale, obj.noisy_grad(zx, 1, rng), acc);
  }
  for (double& v : acc) v /= cfg.batch;
  return acc;
}

Vec grad_F_ref(const Objective& obj, const Vec& x, double gamma, int panels, int order) {
  const QuadRule rule = composite_gauss_legendre01(panels, order);
  Vec acc(x.size(), 0.0);
  Vec zx(x.size());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double z = rule.nodes[q];
    for (std::size_t i = 0; i < x.size(); ++i) zx[i] = z * x[i];
    axpy(rule.weights[q] * std::exp(gamma * (z - 1.0)), obj.grad(zx), acc);
  }
  return acc;
}

double value_F_ref(const Objective& obj, const Vec& x, double gamma, int panels, int order) {
  const QuadRule rule = composite_gauss_legendre01(panels, order);
  double acc = 0.0;
  Vec zx(x.size());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double z = rule.nodes[q];
    double g;
    if (z == 0.0) {
      g = dot(x, obj.grad(zeros(x.size())));  // removable singularity at 0
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) zx[i] = z * x[i];
      g = obj.value(zx) / z;
    }
    acc += rule.weights[q] * std::exp(gamma * (z - 1.0)) * g;
  }
  return acc;
}

}  // namespace submax
