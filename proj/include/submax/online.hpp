#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "submax/offline.hpp"

namespace submax {

// Feedback timing of a T-round game: the gradient information of round u
// arrives at the end of round u + d_u - 1, or never when that exceeds T.
struct DelaySchedule {
  int T = 0;
  std::vector<int> d;                     // per-round delay, d_t >= 1
  std::vector<std::vector<int>> buckets;  // rounds arriving at the end of round t (1-based)
  std::vector<int> dropped;               // rounds whose feedback falls past the horizon
  long long total = 0;                    // D = sum of delays
};

DelaySchedule schedule_none(int T);
DelaySchedule schedule_uniform(int T, int lo, int hi, RngStream& rng);
DelaySchedule schedule_explicit(std::vector<int> d);

using ObjectiveSeq = std::vector<std::shared_ptr<const Objective>>;

struct OnlineConfig {
  int T = 100;
  int batch = 1;
  std::optional<double> grad_bound;  // l2 bound G on raw stochastic gradients
  // Fixed step instead of the delay-aware schedule; the experiment protocol
  // runs the boosted solver at 1/sqrt(T), matching the plain one.
  std::optional<double> eta_override;
  int K = 50;  // oracle count for the meta solvers
  double c = 1.0;
  int quad_panels = 8;
  int quad_order = 8;
  bool meta_exact_grad = true;  // plain meta solver queries exact gradients
};

struct OnlineTrace {
  std::vector<Vec> actions;
  Vec rewards;  // f_t(x_t), exact values
  Vec cum_rewards;
  std::vector<std::vector<int>> arrived;  // feedback ids applied at each round
  std::vector<int> dropped;
  double eta = 0.0;
  double grad_bound_used = 0.0;  // 0 when the solver has no gradient bound
  std::vector<std::int64_t> wallclock_ns;
  std::uint64_t seed = 0;
};

// Delayed projected ascent on the boosted gradients, one query per round,
// step diam(C) / (scale * G * sqrt(D)). When cfg.grad_bound is unset, G is
// estimated before round 1 as 1.2x the largest of 100 seeded stochastic
// gradient norms at feasible points.
OnlineTrace run_obga(const ObjectiveSeq& objs, const FeasibleSet& set,
                     const DelaySchedule& sched, const OnlineConfig& cfg, RngStream& rng);

// Same protocol on the raw stochastic gradients with step 1/sqrt(T).
OnlineTrace run_oga(const ObjectiveSeq& objs, const FeasibleSet& set,
                    const DelaySchedule& sched, const OnlineConfig& cfg, RngStream& rng);

// K projected online-gradient oracles composed into one Frank-Wolfe action
// per round; oracle k is fed the (plain or momentum-averaged) gradient at the
// k-th intermediate point, deferred to the feedback's arrival round.
OnlineTrace run_meta_fw(const ObjectiveSeq& objs, const FeasibleSet& set,
                        const DelaySchedule& sched, const OnlineConfig& cfg, RngStream& rng,
                        bool variance_reduced);

struct HindsightResult {
  Vec x_star;
  double value = 0.0;  // sum_t f_t(x_star)
};

// Deterministic approximate maximizer of the summed sequence objective:
// an anytime Frank-Wolfe pass on the quadrature-boosted average followed by
// exact-gradient ascent refinement, keeping the best point seen.
HindsightResult approx_hindsight_opt(const ObjectiveSeq& objs, const FeasibleSet& set,
                                     int iters);

// Cumulative curve alpha * sum f_t(x_star) - sum f_t(x_t), exact values.
Vec eval_alpha_regret(const OnlineTrace& trace, const ObjectiveSeq& objs, double alpha,
                      const Vec& x_star);

}  // namespace submax
