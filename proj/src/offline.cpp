#include "submax/offline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace submax {

namespace {

using Clock = std::chrono::steady_clock;

Vec start_point(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg) {
  if (cfg.start) {
    if (static_cast<int>(cfg.start->size()) != obj.meta().n)
      throw std::invalid_argument("offline: start point has wrong dimension");
    return *cfg.start;
  }
  return set.project(zeros(obj.meta().n));
}

void check_config(const OfflineConfig& cfg) {
  if (cfg.T < 1) throw std::invalid_argument("offline: T must be >= 1");
  if (cfg.batch < 1) throw std::invalid_argument("offline: batch must be >= 1");
  if (!(cfg.c > 0.0)) throw std::invalid_argument("offline: c must be positive");
  if (!(cfg.delta_bfw > 0.0)) throw std::invalid_argument("offline: delta must be positive");
}

Vec project_at(const FeasibleSet& set, const Vec& y, int t) {
  try {
    return set.project(y);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("iteration " + std::to_string(t) + ": " + e.what(),
                           e.best_iterate(), e.residual());
  }
}

Vec estimate_grad(const Objective& obj, const Vec& x, const OfflineConfig& cfg,
                  RngStream& rng) {
  if (cfg.grad_mode == GradMode::Quadrature)
    return grad_F_ref(obj, x, obj.meta().gamma, cfg.quad_panels, cfg.quad_order);
  BoostConfig bcfg{obj.meta().gamma, cfg.batch, cfg.c, cfg.quad_panels, cfg.quad_order};
  return boost_grad(obj, x, bcfg, rng);
}

void finish_weighted(OfflineTrace& tr, RngStream& rng) {
  tr.weight_sum = sum(tr.weights);
  tr.chosen_index = select_index(tr.weights, rng);
  tr.chosen_point = tr.iterates[tr.chosen_index - 1];
  tr.chosen_value = tr.values[tr.chosen_index - 1];
}

}  // namespace

int select_index(const Vec& weights, RngStream& rng) {
  if (weights.empty()) throw std::invalid_argument("select_index: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("select_index: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("select_index: all-zero weights");
  const double target = rng.uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(weights.size());
}

double bga_eta(int t, const BoostConstants& bc, double diam) {
  const double sigma_gamma = std::sqrt(bc.sigma_gamma_sq);
  const double d = sigma_gamma * std::sqrt(static_cast<double>(t)) / diam + bc.l_gamma;
  if (!(d > 0.0))
    throw std::invalid_argument("bga_eta: degenerate schedule, supply eta_override");
  return 1.0 / d;
}

double bfw_eta(int T, double delta) {
  return std::pow(static_cast<double>(T), -1.0 / (1.0 + delta));
}

double bfw_rho(int t, double delta) {
  return std::min(1.0, 2.0 / std::pow(t + 3.0, 2.0 / (3.0 * (1.0 + delta))));
}

OfflineTrace run_bga(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg,
                     RngStream& rng) {
  check_config(cfg);
  const BoostConstants bc = boost_constants(obj.meta(), cfg.c);
  const double diam = set.diameter();

  OfflineTrace tr;
  Vec x = start_point(obj, set, cfg);
  for (int t = 1; t <= cfg.T; ++t) {
    const auto t0 = Clock::now();
    tr.iterates.push_back(x);
    tr.values.push_back(obj.value(x));
    if (t < cfg.T) {
      const Vec g = estimate_grad(obj, x, cfg, rng);
      const double eta = cfg.eta_override ? *cfg.eta_override : bga_eta(t, bc, diam);
      Vec y = x;
      axpy(eta, g, y);
      x = project_at(set, y, t);
    }
    tr.wallclock_ns.push_back(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
  }
  tr.final_point = tr.iterates.back();
  tr.final_value = tr.values.back();
  tr.weights.assign(cfg.T, 1.0);
  tr.weights.back() = 1.0 + std::log(bc.tau);
  finish_weighted(tr, rng);
  return tr;
}

OfflineTrace run_ga(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg,
                    RngStream& rng) {
  check_config(cfg);
  OfflineTrace tr;
  Vec x = start_point(obj, set, cfg);
  for (int t = 1; t <= cfg.T; ++t) {
    const auto t0 = Clock::now();
    tr.iterates.push_back(x);
    tr.values.push_back(obj.value(x));
    if (t < cfg.T) {
      const Vec g = obj.noisy_grad(x, cfg.batch, rng);
      const double eta =
          cfg.eta_override ? *cfg.eta_override : 1.0 / std::sqrt(static_cast<double>(t));
      Vec y = x;
      axpy(eta, g, y);
      x = project_at(set, y, t);
    }
    tr.wallclock_ns.push_back(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
  }
  tr.final_point = tr.iterates.back();
  tr.final_value = tr.values.back();
  tr.weights.assign(cfg.T, 0.0);
  tr.weights.back() = 1.0;
  tr.weight_sum = 1.0;
  tr.chosen_index = cfg.T;
  tr.chosen_point = tr.final_point;
  tr.chosen_value = tr.final_value;
  return tr;
}

namespace {

// Shared body of the Frank-Wolfe pair: T unit-fraction steps along LMO
// directions of `direction(t, x)`; records f(x_t) before each step and keeps
// the point after the last one. The default start is the origin, which
// matches project(0) on down-closed sets and keeps the step sums inside the
// domain box elsewhere.
template <typename DirectionFn>
OfflineTrace run_fw_family(const Objective& obj, const FeasibleSet& set,
                           const OfflineConfig& cfg, DirectionFn&& direction) {
  OfflineTrace tr;
  Vec x = cfg.start ? start_point(obj, set, cfg) : zeros(obj.meta().n);
  const double step = 1.0 / cfg.T;
  for (int t = 1; t <= cfg.T; ++t) {
    const auto t0 = Clock::now();
    tr.iterates.push_back(x);
    tr.values.push_back(obj.value(x));
    axpy(step, set.lmo(direction(t, x)), x);
    tr.wallclock_ns.push_back(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
  }
  if (!set.contains(x, 1e-9)) x = set.project(x);  // non-down-closed sets drift
  tr.final_point = x;
  tr.final_value = obj.value(x);
  tr.weights.assign(cfg.T, 0.0);
  tr.weights.back() = 1.0;
  tr.weight_sum = 1.0;
  tr.chosen_index = cfg.T;
  tr.chosen_point = tr.final_point;
  tr.chosen_value = tr.final_value;
  return tr;
}

}  // namespace

OfflineTrace run_cg(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg) {
  check_config(cfg);
  return run_fw_family(obj, set, cfg, [&](int, const Vec& x) { return obj.grad(x); });
}

OfflineTrace run_scg(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg,
                     RngStream& rng) {
  check_config(cfg);
  Vec d(obj.meta().n, 0.0);
  return run_fw_family(obj, set, cfg, [&](int t, const Vec& x) {
    const double rho = 1.0 / std::pow(t + 3.0, 2.0 / 3.0);
    d = blend(d, obj.noisy_grad(x, cfg.batch, rng), rho);
    return d;
  });
}

OfflineTrace run_bfw(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg,
                     RngStream& rng) {
  check_config(cfg);
  const BoostConstants bc = boost_constants(obj.meta(), cfg.c);
  const double eta = cfg.eta_override ? *cfg.eta_override : bfw_eta(cfg.T, cfg.delta_bfw);

  OfflineTrace tr;
  Vec x = start_point(obj, set, cfg);
  Vec v = cfg.bfw_v0_feasible ? set.project(zeros(obj.meta().n)) : zeros(obj.meta().n);
  for (int t = 1; t <= cfg.T; ++t) {
    const auto t0 = Clock::now();
    tr.iterates.push_back(x);
    tr.values.push_back(obj.value(x));
    if (t < cfg.T) {
      v = blend(v, estimate_grad(obj, x, cfg, rng), bfw_rho(t, cfg.delta_bfw));
      const Vec s = set.lmo(v);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = (1.0 - eta) * x[i] + eta * s[i];
    }
    tr.wallclock_ns.push_back(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
  }
  tr.final_point = tr.iterates.back();
  tr.final_value = tr.values.back();
  tr.weights.assign(cfg.T, eta);
  tr.weights.back() = (1.0 + std::log(bc.tau)) / eta;
  finish_weighted(tr, rng);
  return tr;
}

}  // namespace submax
