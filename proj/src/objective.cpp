#include "submax/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace submax {

ObjectiveMeta make_meta(Vec a, double L, double gamma, double sigma) {
  ObjectiveMeta m;
  for (double ai : a)
    if (!(ai > 0.0)) throw std::invalid_argument("make_meta: box bounds must be positive");
  if (L < 0.0) throw std::invalid_argument("make_meta: L must be nonnegative");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("make_meta: gamma must lie in (0, 1]");
  if (sigma < 0.0) throw std::invalid_argument("make_meta: sigma must be nonnegative");
  m.n = static_cast<int>(a.size());
  m.radius_x = nrm2(a);
  m.a = std::move(a);
  m.L = L;
  m.gamma = gamma;
  m.sigma = sigma;
  return m;
}

Vec Objective::noisy_grad(const Vec& x, int batch, RngStream& rng) const {
  if (batch < 1) throw std::invalid_argument("noisy_grad: batch must be >= 1");
  Vec g = grad(x);
  Vec acc(g.size(), 0.0);
  for (int b = 0; b < batch; ++b)
    for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i] + noise_delta_ * rng.gaussian();
  for (double& v : acc) v /= batch;
  return acc;
}

StructureReport verify_structure(const Objective& obj, double gamma, int trials, double tol,
                                 RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("verify_structure: trials must be >= 1");
  const ObjectiveMeta& meta = obj.meta();
  StructureReport report;
  report.trials = trials;
  report.gamma_hat = 1.0 / gamma;  // shrinks toward the observed ratio infimum

  auto sample_box = [&]() {
    Vec x(meta.n);
    for (int i = 0; i < meta.n; ++i) x[i] = meta.a[i] * rng.uniform01();
    return x;
  };

  for (int t = 0; t < trials; ++t) {
    const Vec u = sample_box();
    const Vec v = sample_box();
    const Vec lo = meet(u, v);
    const Vec hi = join(u, v);

    // ordered pair: grad(lo) >= gamma * grad(hi), componentwise
    const Vec glo = obj.grad(lo);
    const Vec ghi = obj.grad(hi);
    for (int i = 0; i < meta.n; ++i) {
      const double slack = gamma * ghi[i] - glo[i];
      if (slack > tol)
        report.violations.push_back({t, StructureCheck::GradRatio, i, slack});
      if (ghi[i] > 1e-12 && glo[i] >= 0.0)
        report.gamma_hat = std::min(report.gamma_hat, glo[i] / ghi[i]);
    }

    // unordered pair: <v - u, grad(u)> >= gamma f(u v v) + f(u ^ v)/gamma - (gamma + 1/gamma) f(u)
    const Vec gu = obj.grad(u);
    Vec diff(meta.n);
    for (int i = 0; i < meta.n; ++i) diff[i] = v[i] - u[i];
    const double lhs = dot(diff, gu);
    const double rhs = gamma * obj.value(hi) + obj.value(lo) / gamma -
                       (gamma + 1.0 / gamma) * obj.value(u);
    if (rhs - lhs > tol)
      report.violations.push_back({t, StructureCheck::MeetJoin, -1, rhs - lhs});
  }
  report.gamma_hat = std::min(report.gamma_hat, 1.0);
  return report;
}

}  // namespace submax
