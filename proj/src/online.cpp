#include "submax/online.hpp"

#include "submax/problems.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace submax {

namespace {

using Clock = std::chrono::steady_clock;

DelaySchedule build_from_delays(std::vector<int> d) {
  DelaySchedule s;
  s.T = static_cast<int>(d.size());
  s.buckets.assign(s.T, {});
  s.total = 0;
  for (int u = 1; u <= s.T; ++u) {
    const int du = d[u - 1];
    if (du < 1) throw std::invalid_argument("delay schedule: delays must be >= 1");
    s.total += du;
    const int arrival = u + du - 1;
    if (arrival <= s.T)
      s.buckets[arrival - 1].push_back(u);
    else
      s.dropped.push_back(u);
  }
  s.d = std::move(d);
  return s;
}

void check_online_inputs(const ObjectiveSeq& objs, const DelaySchedule& sched,
                         const OnlineConfig& cfg) {
  if (cfg.T < 1) throw std::invalid_argument("online: T must be >= 1");
  if (cfg.batch < 1) throw std::invalid_argument("online: batch must be >= 1");
  if (static_cast<int>(objs.size()) != cfg.T || sched.T != cfg.T)
    throw std::invalid_argument("online: objective count, schedule and T must agree");
  for (const auto& o : objs)
    if (!o) throw std::invalid_argument("online: null objective");
}

Vec project_at_round(const FeasibleSet& set, const Vec& y, int t) {
  try {
    return set.project(y);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("round " + std::to_string(t) + ": " + e.what(), e.best_iterate(),
                           e.residual());
  }
}

double estimate_grad_bound(const ObjectiveSeq& objs, const FeasibleSet& set,
                           const OnlineConfig& cfg, RngStream& rng) {
  double max_nrm = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec x = set.sample(rng);
    max_nrm = std::max(max_nrm, nrm2(objs[0]->noisy_grad(x, cfg.batch, rng)));
  }
  return 1.2 * max_nrm;
}

// Shared delayed-ascent protocol: query one gradient estimate per round,
// stamp it with its arrival round, apply whole buckets in one step.
template <typename QueryFn>
OnlineTrace run_delayed_ascent(const ObjectiveSeq& objs, const FeasibleSet& set,
                               const DelaySchedule& sched, const OnlineConfig& cfg,
                               double eta, QueryFn&& query) {
  OnlineTrace tr;
  tr.eta = eta;
  tr.dropped = sched.dropped;
  std::vector<Vec> grads(cfg.T);
  Vec x = set.project(zeros(set.dim()));
  double cum = 0.0;
  for (int t = 1; t <= cfg.T; ++t) {
    const auto t0 = Clock::now();
    tr.actions.push_back(x);
    const double reward = objs[t - 1]->value(x);
    cum += reward;
    tr.rewards.push_back(reward);
    tr.cum_rewards.push_back(cum);

    grads[t - 1] = query(t, x);

    const auto& bucket = sched.buckets[t - 1];
    tr.arrived.push_back(bucket);
    if (!bucket.empty()) {
      Vec y = x;
      for (int u : bucket) axpy(eta, grads[u - 1], y);
      x = project_at_round(set, y, t);
    }
    tr.wallclock_ns.push_back(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
  }
  return tr;
}

}  // namespace

DelaySchedule schedule_none(int T) {
  if (T < 1) throw std::invalid_argument("schedule_none: T must be >= 1");
  return build_from_delays(std::vector<int>(T, 1));
}

DelaySchedule schedule_uniform(int T, int lo, int hi, RngStream& rng) {
  if (T < 1) throw std::invalid_argument("schedule_uniform: T must be >= 1");
  if (lo < 1 || hi < lo) throw std::invalid_argument("schedule_uniform: need 1 <= lo <= hi");
  std::vector<int> d(T);
  for (int t = 0; t < T; ++t) d[t] = static_cast<int>(rng.uniform_int(lo, hi));
  return build_from_delays(std::move(d));
}

DelaySchedule schedule_explicit(std::vector<int> d) {
  if (d.empty()) throw std::invalid_argument("schedule_explicit: empty delay list");
  return build_from_delays(std::move(d));
}

OnlineTrace run_obga(const ObjectiveSeq& objs, const FeasibleSet& set,
                     const DelaySchedule& sched, const OnlineConfig& cfg, RngStream& rng) {
  check_online_inputs(objs, sched, cfg);
  const double gamma = objs[0]->meta().gamma;
  const double scale = boost_scale(gamma);
  double eta;
  double g_bound = 0.0;
  if (cfg.eta_override) {
    eta = *cfg.eta_override;
  } else {
    g_bound = cfg.grad_bound ? *cfg.grad_bound : estimate_grad_bound(objs, set, cfg, rng);
    eta = set.diameter() / (scale * g_bound * std::sqrt(static_cast<double>(sched.total)));
  }

  BoostConfig bcfg{gamma, cfg.batch, cfg.c, cfg.quad_panels, cfg.quad_order};
  OnlineTrace tr = run_delayed_ascent(objs, set, sched, cfg, eta, [&](int t, const Vec& x) {
    return boost_grad(*objs[t - 1], x, bcfg, rng);
  });
  tr.grad_bound_used = g_bound;
  return tr;
}

OnlineTrace run_oga(const ObjectiveSeq& objs, const FeasibleSet& set,
                    const DelaySchedule& sched, const OnlineConfig& cfg, RngStream& rng) {
  check_online_inputs(objs, sched, cfg);
  const double eta = 1.0 / std::sqrt(static_cast<double>(cfg.T));
  return run_delayed_ascent(objs, set, sched, cfg, eta, [&](int t, const Vec& x) {
    return objs[t - 1]->noisy_grad(x, cfg.batch, rng);
  });
}

OnlineTrace run_meta_fw(const ObjectiveSeq& objs, const FeasibleSet& set,
                        const DelaySchedule& sched, const OnlineConfig& cfg, RngStream& rng,
                        bool variance_reduced) {
  check_online_inputs(objs, sched, cfg);
  if (cfg.K < 1) throw std::invalid_argument("run_meta_fw: K must be >= 1");
  const int K = cfg.K;
  const int n = set.dim();
  const double eta_oracle = 1.0 / std::sqrt(static_cast<double>(cfg.T));

  OnlineTrace tr;
  tr.eta = eta_oracle;
  tr.dropped = sched.dropped;

  const Vec base = set.project(zeros(n));
  std::vector<Vec> oracle_action(K, base);
  std::vector<Vec> momentum(variance_reduced ? K : 0, zeros(n));
  // queried[u][k]: gradient estimate for round u at the k-th intermediate point
  std::vector<std::vector<Vec>> queried(cfg.T);

  double cum = 0.0;
  for (int t = 1; t <= cfg.T; ++t) {
    const auto t0 = Clock::now();
    // compose the round's action and remember the intermediate points
    std::vector<Vec> pts(K + 1);
    pts[0] = base;
    for (int k = 1; k <= K; ++k) {
      pts[k] = pts[k - 1];
      axpy(1.0 / K, oracle_action[k - 1], pts[k]);
    }
    Vec x = pts[K];
    if (!set.contains(x, 1e-9)) x = project_at_round(set, x, t);

    tr.actions.push_back(x);
    const double reward = objs[t - 1]->value(x);
    cum += reward;
    tr.rewards.push_back(reward);
    tr.cum_rewards.push_back(cum);

    // query this round's K gradients now; they surface at the arrival round
    auto& q = queried[t - 1];
    q.resize(K);
    for (int k = 1; k <= K; ++k)
      q[k - 1] = cfg.meta_exact_grad && !variance_reduced
                     ? objs[t - 1]->grad(pts[k])
                     : objs[t - 1]->noisy_grad(pts[k], cfg.batch, rng);

    const auto& bucket = sched.buckets[t - 1];
    tr.arrived.push_back(bucket);
    for (int u : bucket) {  // ascending round order
      for (int k = 0; k < K; ++k) {
        Vec feed;
        if (variance_reduced) {
          const double rho = 1.0 / std::pow(u + 3.0, 2.0 / 3.0);
          momentum[k] = blend(momentum[k], queried[u - 1][k], rho);
          feed = momentum[k];
        } else {
          feed = queried[u - 1][k];
        }
        Vec y = oracle_action[k];
        axpy(eta_oracle, feed, y);
        oracle_action[k] = project_at_round(set, y, t);
      }
      queried[u - 1].clear();
    }
    tr.wallclock_ns.push_back(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
  }
  return tr;
}

HindsightResult approx_hindsight_opt(const ObjectiveSeq& objs, const FeasibleSet& set,
                                     int iters) {
  if (iters < 1) throw std::invalid_argument("approx_hindsight_opt: iters must be >= 1");
  if (objs.empty()) throw std::invalid_argument("approx_hindsight_opt: empty sequence");
  std::vector<std::shared_ptr<const Objective>> parts(objs.begin(), objs.end());
  const AverageObjective avg(parts);
  const double gamma = avg.meta().gamma;

  Vec best = set.project(zeros(set.dim()));
  double best_val = avg.value(best);
  auto consider = [&](const Vec& x) {
    const double v = avg.value(x);
    if (v > best_val) {
      best_val = v;
      best = x;
    }
  };

  // anytime Frank-Wolfe on the boosted average: prefix-stable schedules so a
  // larger budget extends the same trajectory
  const double delta = 1.0;
  Vec x = best;
  Vec v = zeros(set.dim());
  for (int t = 1; t <= iters; ++t) {
    v = blend(v, grad_F_ref(avg, x, gamma), bfw_rho(t, delta));
    const Vec s = set.lmo(v);
    const double eta = std::pow(static_cast<double>(t), -1.0 / (1.0 + delta));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (1.0 - eta) * x[i] + eta * s[i];
    consider(x);
  }

  // exact-gradient ascent refinement from the best point seen; step 1/L keeps
  // every move an improvement, so the running best is monotone
  const double step = avg.meta().L > 0.0 ? 1.0 / avg.meta().L : 1.0;
  Vec xr = best;
  for (int t = 1; t <= iters; ++t) {
    Vec y = xr;
    axpy(step, avg.grad(xr), y);
    xr = set.project(y);
    consider(xr);
  }

  HindsightResult res;
  res.x_star = best;
  double total = 0.0;
  for (const auto& o : objs) total += o->value(best);
  res.value = total;
  return res;
}

Vec eval_alpha_regret(const OnlineTrace& trace, const ObjectiveSeq& objs, double alpha,
                      const Vec& x_star) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("eval_alpha_regret: alpha must lie in (0, 1]");
  if (trace.rewards.size() != objs.size())
    throw std::invalid_argument("eval_alpha_regret: trace and sequence length mismatch");
  Vec curve(objs.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < objs.size(); ++t) {
    acc += alpha * objs[t]->value(x_star) - trace.rewards[t];
    curve[t] = acc;
  }
  return curve;
}

}  // namespace submax
