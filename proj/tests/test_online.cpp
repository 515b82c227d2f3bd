#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "submax/online.hpp"
#include "submax/oracles.hpp"
#include "submax/problems.hpp"

using namespace submax;

namespace {

Polytope qp_polytope(const QpProblem& p) { return Polytope{p.A, p.b, p.u}; }

ObjectiveSeq qp_sequence(int T, int n, int m, std::uint64_t seed, double noise_delta) {
  // shared constraint matrix, fresh quadratic per round
  ObjectiveSeq objs;
  const QpProblem base = qp_generate(n, m, seed, noise_delta);
  for (int t = 0; t < T; ++t) {
    QpProblem p = qp_generate(n, m, mix_seed(seed, t + 1), noise_delta);
    p.A = base.A;
    p.b = base.b;
    objs.push_back(std::make_shared<QpObjective>(std::move(p)));
  }
  return objs;
}

ObjectiveSeq repeat_objective(std::shared_ptr<const Objective> obj, int T) {
  return ObjectiveSeq(T, std::move(obj));
}

std::shared_ptr<QpObjective> concave_1d(double noise_delta = 0.0) {
  DenseMatrix h(1, 1);
  h(0, 0) = -1.0;
  return std::make_shared<QpObjective>(qp_fixture(std::move(h), noise_delta));
}

}  // namespace

TEST_SUITE("online") {

TEST_CASE("schedule: no delays means every round feeds itself") {
  const DelaySchedule s = schedule_none(5);
  CHECK(s.total == 5);
  CHECK(s.dropped.empty());
  for (int t = 1; t <= 5; ++t) {
    REQUIRE(s.buckets[t - 1].size() == 1);
    CHECK(s.buckets[t - 1][0] == t);
  }
}

TEST_CASE("schedule: explicit delays route into the right buckets") {
  const DelaySchedule s = schedule_explicit({2, 1, 3});
  CHECK(s.total == 6);
  CHECK(s.buckets[0].empty());
  CHECK(s.buckets[1] == std::vector<int>{1, 2});
  CHECK(s.buckets[2].empty());
  CHECK(s.dropped == std::vector<int>{3});
  CHECK_THROWS_AS(schedule_explicit({1, 0, 2}), std::invalid_argument);
}

TEST_CASE("schedule: uniform delays stay in range with the right mean") {
  RngStream rng(77);
  const DelaySchedule s = schedule_uniform(100, 1, 5, rng);
  double mean = 0.0;
  for (int d : s.d) {
    CHECK(d >= 1);
    CHECK(d <= 5);
    mean += d;
  }
  mean /= 100.0;
  CHECK(mean > 2.6);
  CHECK(mean < 3.4);
}

TEST_CASE("schedule: every round is delivered once or dropped") {
  RngStream rng(78);
  for (int rep = 0; rep < 20; ++rep) {
    const DelaySchedule s = schedule_uniform(60, 1, 7, rng);
    std::size_t delivered = 0;
    for (const auto& bucket : s.buckets) delivered += bucket.size();
    CHECK(delivered + s.dropped.size() == 60);
  }
}

TEST_CASE("obga: degenerate one-round horizon") {
  OnlineConfig cfg;
  cfg.T = 1;
  RngStream rng(5);
  const auto objs = repeat_objective(concave_1d(), 1);
  const FeasibleSet set = FeasibleSet::box(ones(1));
  const OnlineTrace tr = run_obga(objs, set, schedule_none(1), cfg, rng);
  CHECK(tr.rewards.size() == 1);
  CHECK(tr.actions.size() == 1);
  CHECK(tr.eta == doctest::Approx(set.diameter() /
                                  (boost_scale(1.0) * tr.grad_bound_used * 1.0)));
}

TEST_CASE("obga: permuting delivery order inside a bucket leaves actions unchanged") {
  const int T = 6;
  const auto objs = qp_sequence(T, 5, 3, 404, 1.0);
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(
      std::static_pointer_cast<const QpObjective>(objs[0])->problem()));
  OnlineConfig cfg;
  cfg.T = T;

  DelaySchedule fwd = schedule_explicit({3, 2, 1, 1, 1, 1});  // rounds 1..3 land together
  DelaySchedule rev = fwd;
  for (auto& bucket : rev.buckets) std::reverse(bucket.begin(), bucket.end());

  RngStream ra(6), rb(6);
  const OnlineTrace a = run_obga(objs, set, fwd, cfg, ra);
  const OnlineTrace b = run_obga(objs, set, rev, cfg, rb);
  for (int t = 0; t < T; ++t) CHECK(dist2(a.actions[t], b.actions[t]) < 1e-12);
}

TEST_CASE("obga and oga: determinism and a shared round structure") {
  const int T = 12;
  const auto objs = qp_sequence(T, 5, 3, 405, 1.0);
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(
      std::static_pointer_cast<const QpObjective>(objs[0])->problem()));
  OnlineConfig cfg;
  cfg.T = T;
  RngStream rs(7);
  const DelaySchedule sched = schedule_uniform(T, 1, 4, rs);

  RngStream r1(8), r2(8), r3(8);
  const OnlineTrace a = run_obga(objs, set, sched, cfg, r1);
  const OnlineTrace b = run_obga(objs, set, sched, cfg, r2);
  CHECK(a.rewards == b.rewards);
  for (int t = 0; t < T; ++t) CHECK(a.actions[t] == b.actions[t]);

  const OnlineTrace c = run_oga(objs, set, sched, cfg, r3);
  for (int t = 0; t < T; ++t) CHECK(a.arrived[t] == c.arrived[t]);
  CHECK(c.eta == doctest::Approx(1.0 / std::sqrt(static_cast<double>(T))));
}

TEST_CASE("oga: cumulative gap on the repeated concave fixture grows sublinearly") {
  auto gap_at = [&](int T) {
    const auto objs = repeat_objective(concave_1d(), T);
    const FeasibleSet set = FeasibleSet::box(ones(1));
    OnlineConfig cfg;
    cfg.T = T;
    RngStream rng(9);
    const OnlineTrace tr = run_oga(objs, set, schedule_none(T), cfg, rng);
    return T * 0.5 - tr.cum_rewards.back();  // f(x*) = 0.5 at x* = 1
  };
  const double g100 = gap_at(100);
  const double g400 = gap_at(400);
  CHECK(g400 > 0.0);
  CHECK(g400 < 4.0 * g100);
}

TEST_CASE("causality: shrinking one delay only changes actions after the new arrival") {
  const int T = 6;
  const auto objs = qp_sequence(T, 5, 3, 406, 1.0);
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(
      std::static_pointer_cast<const QpObjective>(objs[0])->problem()));
  OnlineConfig cfg;
  cfg.T = T;

  const DelaySchedule slow = schedule_explicit({4, 1, 1, 1, 1, 1});
  const DelaySchedule fast = schedule_explicit({2, 1, 1, 1, 1, 1});
  RngStream ra(10), rb(10);
  const OnlineTrace a = run_obga(objs, set, slow, cfg, ra);
  const OnlineTrace b = run_obga(objs, set, fast, cfg, rb);
  // feedback of round 1 now lands at the end of round 2: x_1, x_2 unchanged
  CHECK(a.actions[0] == b.actions[0]);
  CHECK(a.actions[1] == b.actions[1]);
  CHECK(dist2(a.actions[2], b.actions[2]) > 1e-12);
}

TEST_CASE("meta_fw: K = 1 plays the oracle's action on a down-closed set") {
  const int T = 8;
  const auto objs = qp_sequence(T, 4, 2, 407, 0.0);
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(
      std::static_pointer_cast<const QpObjective>(objs[0])->problem()));
  OnlineConfig cfg;
  cfg.T = T;
  cfg.K = 1;
  RngStream rng(11);
  const OnlineTrace tr = run_meta_fw(objs, set, schedule_none(T), cfg, rng, false);

  // replay the single oracle by hand: v starts at project(0) = 0 and performs
  // one projected ascent step per arrived (here: immediate) gradient
  Vec v = set.project(zeros(4));
  const double eta = 1.0 / std::sqrt(static_cast<double>(T));
  for (int t = 1; t <= T; ++t) {
    CHECK(dist2(tr.actions[t - 1], v) < 1e-9);
    Vec y = v;
    axpy(eta, objs[t - 1]->grad(tr.actions[t - 1]), y);
    v = set.project(y);
  }
}

TEST_CASE("meta_fw: actions feasible for both variants, with and without delays") {
  const int T = 10;
  const auto objs = qp_sequence(T, 5, 3, 408, 2.0);
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(
      std::static_pointer_cast<const QpObjective>(objs[0])->problem()));
  OnlineConfig cfg;
  cfg.T = T;
  cfg.K = 7;
  RngStream rs(12);
  const DelaySchedule delayed = schedule_uniform(T, 1, 3, rs);
  for (bool vr : {false, true}) {
    RngStream r1(13), r2(14);
    for (const Vec& x : run_meta_fw(objs, set, schedule_none(T), cfg, r1, vr).actions)
      CHECK(set.contains(x, 1e-7));
    for (const Vec& x : run_meta_fw(objs, set, delayed, cfg, r2, vr).actions)
      CHECK(set.contains(x, 1e-7));
  }
}

TEST_CASE("hindsight: repeated objective recovers the grid maximum") {
  const auto base = std::make_shared<QpObjective>(qp_generate(2, 1, 409));
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(base->problem()));
  const auto objs = repeat_objective(base, 7);
  const HindsightResult h = approx_hindsight_opt(objs, set, 200);
  const auto opt = oracle::grid_opt_2d([&](const Vec& x) { return base->value(x); }, set);
  CHECK(h.value / 7.0 >= opt.value - 1e-2);
  CHECK(set.contains(h.x_star, 1e-7));
}

TEST_CASE("hindsight: 2-d sequences land within grid tolerance of the summed optimum") {
  for (std::uint64_t seed : {42u, 43u, 44u}) {
    const int T = 5;
    const auto objs = qp_sequence(T, 2, 1, seed, 0.0);
    const FeasibleSet set = FeasibleSet::polytope(qp_polytope(
        std::static_pointer_cast<const QpObjective>(objs[0])->problem()));
    const HindsightResult h = approx_hindsight_opt(objs, set, 300);
    auto total = [&](const Vec& x) {
      double s = 0.0;
      for (const auto& o : objs) s += o->value(x);
      return s;
    };
    const auto opt = oracle::grid_opt_2d(total, set);
    CHECK(h.value >= opt.value - 1e-2);
  }
}

TEST_CASE("hindsight: running-best value is monotone in the iteration budget") {
  const int T = 6;
  const auto objs = qp_sequence(T, 4, 2, 410, 0.0);
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(
      std::static_pointer_cast<const QpObjective>(objs[0])->problem()));
  const double v20 = approx_hindsight_opt(objs, set, 20).value;
  const double v60 = approx_hindsight_opt(objs, set, 60).value;
  const double v200 = approx_hindsight_opt(objs, set, 200).value;
  CHECK(v20 <= v60 + 1e-12);
  CHECK(v60 <= v200 + 1e-12);
}

TEST_CASE("alpha regret: fixed-comparator identities") {
  const int T = 5;
  const auto base = concave_1d();
  const auto objs = repeat_objective(base, T);
  const FeasibleSet set = FeasibleSet::box(ones(1));

  // play x_star every round: R(T) = (alpha - 1) sum f(x_star) <= 0
  OnlineTrace fake;
  const Vec x_star{1.0};
  for (int t = 0; t < T; ++t) {
    fake.actions.push_back(x_star);
    fake.rewards.push_back(base->value(x_star));
  }
  const double alpha = -std::expm1(-1.0);
  const Vec curve = eval_alpha_regret(fake, objs, alpha, x_star);
  CHECK(curve.back() == doctest::Approx((alpha - 1.0) * T * 0.5));
  CHECK(curve.back() <= 0.0);

  // telescoping: increments equal the per-round terms exactly
  for (int t = 1; t < T; ++t)
    CHECK(curve[t] - curve[t - 1] ==
          doctest::Approx(alpha * base->value(x_star) - fake.rewards[t]));

  OnlineTrace one;
  one.actions.push_back(x_star);
  one.rewards.push_back(base->value(x_star));
  CHECK(eval_alpha_regret(one, repeat_objective(base, 1), 1.0, x_star)[0] ==
        doctest::Approx(0.0));
}

TEST_CASE("obga: recorded eta matches the diameter over scaled-bound formula") {
  const int T = 9;
  const auto objs = qp_sequence(T, 5, 3, 411, 1.0);
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(
      std::static_pointer_cast<const QpObjective>(objs[0])->problem()));
  OnlineConfig cfg;
  cfg.T = T;
  RngStream rs(15);
  const DelaySchedule sched = schedule_uniform(T, 1, 4, rs);
  RngStream rng(16);
  const OnlineTrace tr = run_obga(objs, set, sched, cfg, rng);
  CHECK(tr.eta == doctest::Approx(set.diameter() /
                                  (boost_scale(1.0) * tr.grad_bound_used *
                                   std::sqrt(static_cast<double>(sched.total)))));

  OnlineConfig pinned = cfg;
  pinned.grad_bound = 10.0;
  RngStream rng2(16);
  const OnlineTrace tp = run_obga(objs, set, sched, pinned, rng2);
  CHECK(tp.grad_bound_used == 10.0);
}

}  // TEST_SUITE
