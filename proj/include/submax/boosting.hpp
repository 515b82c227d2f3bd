#pragma once

#include "submax/objective.hpp"
#include "submax/quadrature.hpp"

namespace submax {

// Knobs of the boosted gradient machinery.
struct BoostConfig {
  double gamma = 1.0;
  int batch = 1;
  double c = 1.0;  // additive constant of the auxiliary-value bound
  int quad_panels = 8;
  int quad_order = 8;
};

// Constants derived from the objective's metadata. With s = (1 - e^-g)/g:
//   l_gamma        smoothness of the auxiliary objective, L (g + e^-g - 1)/g^2
//   sigma_gamma_sq variance bound of the single-draw boosted estimator,
//                  2 s^2 sigma^2 + 2 L^2 r^2 (1 - e^-2g) / (3g)
//   tau            max(1/g, L r^2 / c)
struct BoostConstants {
  double l_gamma = 0.0;
  double sigma_gamma_sq = 0.0;
  double tau = 0.0;
  double scale = 0.0;  // (1 - e^-gamma) / gamma
};

double boost_scale(double gamma);
BoostConstants boost_constants(const ObjectiveMeta& meta, double c);

// Exact inverse CDF of the reweighting variable Z with density proportional
// to e^{gamma (z - 1)} on [0, 1], evaluated at p. Below gamma = 1e-8 the
// density is uniform to machine precision and p is returned directly.
double z_from_uniform(double gamma, double p);

// One draw of Z from the stream. gamma must lie in (0, 1].
double sample_z(double gamma, RngStream& rng);

// Mean of cfg.batch independent draws of scale * noisy_grad(z_i * x), each
// with its own z_i; an unbiased estimate of the auxiliary gradient at x.
Vec boost_grad(const Objective& obj, const Vec& x, const BoostConfig& cfg, RngStream& rng);

// Quadrature references for the auxiliary objective and its gradient, using
// the exact oracle. panels * order evaluations on (0, 1).
Vec grad_F_ref(const Objective& obj, const Vec& x, double gamma, int panels = 8, int order = 8);
double value_F_ref(const Objective& obj, const Vec& x, double gamma, int panels = 8,
                   int order = 8);

}  // namespace submax
