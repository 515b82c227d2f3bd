#include "submax/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "submax/bench.hpp"
#include "submax/boosting.hpp"
#include "submax/oracles.hpp"
#include "submax/problems.hpp"
#include "submax/svg.hpp"

namespace submax {

namespace {

using Outcome = std::pair<bool, std::string>;

CheckResult timed(const std::string& name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = name;
  try {
    auto [pass, detail] = fn();
    r.pass = pass;
    r.detail = std::move(detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

QpObjective analytic_fixture(double noise_delta) {
  DenseMatrix h(2, 2);
  h(0, 0) = h(1, 1) = -1.0;
  return QpObjective(qp_fixture(std::move(h), noise_delta));
}

Polytope qp_polytope(const QpProblem& p) { return Polytope{p.A, p.b, p.u}; }

Vec random_box_point(const ObjectiveMeta& meta, RngStream& rng) {
  Vec x(meta.n);
  for (int i = 0; i < meta.n; ++i) x[i] = meta.a[i] * rng.uniform01();
  return x;
}

// ---- criterion 1: estimator unbiasedness on the analytic fixture ----
Outcome check_unbiasedness() {
  const QpObjective obj = analytic_fixture(1.0);
  RngStream rng(90210);
  const Vec x{1.0, 1.0};
  const double want = 1.0 - 2.0 * std::exp(-1.0);
  const int draws = 100000;
  Vec acc(2, 0.0), acc2(2, 0.0);
  const BoostConfig cfg{1.0, 1, 1.0, 8, 8};
  for (int i = 0; i < draws; ++i) {
    const Vec g = boost_grad(obj, x, cfg, rng);
    for (int j = 0; j < 2; ++j) {
      acc[j] += g[j];
      acc2[j] += g[j] * g[j];
    }
  }
  double worst = 0.0;
  for (int j = 0; j < 2; ++j) {
    const double mean = acc[j] / draws;
    const double se = std::sqrt(acc2[j] / draws - mean * mean) / std::sqrt(double(draws));
    worst = std::max(worst, std::abs(mean - want) / se);
  }
  return {worst < 4.0, "max |mean - ref| = " + fmt(worst) + " standard errors (limit 4)"};
}

// ---- criterion 2: single-draw variance bound on the experiment QP ----
Outcome check_variance_bound() {
  const QpObjective obj(qp_generate(25, 12, 7, 5.0));
  const BoostConstants bc = boost_constants(obj.meta(), 1.0);
  RngStream rng(90211);
  const BoostConfig cfg{1.0, 1, 1.0, 8, 8};
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Vec x = random_box_point(obj.meta(), rng);
    const Vec ref = grad_F_ref(obj, x, 1.0);
    const int draws = 2000;
    double acc = 0.0;
    for (int i = 0; i < draws; ++i) {
      const Vec g = boost_grad(obj, x, cfg, rng);
      double d2 = 0.0;
      for (int j = 0; j < 25; ++j) d2 += (g[j] - ref[j]) * (g[j] - ref[j]);
      acc += d2;
    }
    worst = std::max(worst, acc / draws / bc.sigma_gamma_sq);
  }
  return {worst <= 1.1,
          "max sample-variance / sigma_gamma^2 = " + fmt(worst) + " (limit 1.1)"};
}

// ---- criterion 3: <y - x, F'(x)> >= (1 - e^-g) f(y) - f(x) ----
Outcome check_key_inequality() {
  RngStream rng(90212);
  double worst = 1e300;
  const double factor = -std::expm1(-1.0);

  const QpObjective qp(qp_generate(25, 12, 7, 0.0));
  const FeasibleSet qp_set = FeasibleSet::polytope(qp_polytope(qp.problem()));
  const SpecialCaseObjective fk(5);
  const FeasibleSet fk_set = FeasibleSet::cardinality(11, 5.0);

  auto run_pairs = [&](const Objective& obj, const FeasibleSet& set) {
    const int n = obj.meta().n;
    for (int rep = 0; rep < 1000; ++rep) {
      const Vec x = set.sample(rng);
      const Vec y = set.sample(rng);
      const Vec gf = grad_F_ref(obj, x, 1.0);
      Vec diff(n);
      for (int i = 0; i < n; ++i) diff[i] = y[i] - x[i];
      worst = std::min(worst, dot(diff, gf) - (factor * obj.value(y) - obj.value(x)));
    }
  };
  run_pairs(qp, qp_set);
  run_pairs(fk, fk_set);
  return {worst >= -1e-6, "min slack = " + fmt(worst) + " (limit -1e-6)"};
}

// ---- criterion 4: auxiliary gradient is L_gamma-Lipschitz ----
Outcome check_aux_smoothness() {
  const QpObjective obj(qp_generate(25, 12, 7, 0.0));
  const BoostConstants bc = boost_constants(obj.meta(), 1.0);
  RngStream rng(90213);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec x = random_box_point(obj.meta(), rng);
    const Vec y = random_box_point(obj.meta(), rng);
    const double d = dist2(x, y);
    if (d < 1e-12) continue;
    worst = std::max(worst, dist2(grad_F_ref(obj, x, 1.0), grad_F_ref(obj, y, 1.0)) /
                                (bc.l_gamma * d));
  }
  return {worst <= 1.0 + 1e-6, "max ratio = " + fmt(worst) + " (limit 1 + 1e-6)"};
}

// ---- criterion 5: F(x) <= (1 + ln tau)(f(x) + c) ----
Outcome check_aux_bound() {
  const QpObjective obj(qp_generate(25, 12, 7, 0.0));
  const BoostConstants bc = boost_constants(obj.meta(), 1.0);
  RngStream rng(90214);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec x = random_box_point(obj.meta(), rng);
    const double lhs = value_F_ref(obj, x, 1.0);
    const double rhs = (1.0 + std::log(bc.tau)) * (obj.value(x) + 1.0);
    worst = std::max(worst, lhs / rhs);
  }
  return {worst <= 1.0 + 1e-9, "max F / bound = " + fmt(worst) + " (limit 1)"};
}

// ---- criterion 6: stationary-point approximation ratios on 2-d instances ----
Outcome check_stationary_ratios() {
  struct Instance {
    QpObjective obj;
    FeasibleSet set;
    std::vector<Vec> extra_starts;
  };
  std::vector<Instance> instances;

  // planted suboptimal stationary point on the cardinality slice
  DenseMatrix coupling(2, 2);
  coupling(0, 1) = coupling(1, 0) = -1.0;
  instances.push_back({QpObjective(qp_fixture(coupling)), FeasibleSet::cardinality(2, 1.0),
                       {Vec{0.5, 0.5}}});
  for (std::uint64_t seed : {21u, 22u})
    instances.push_back(
        {QpObjective(qp_generate(2, 1, seed)), FeasibleSet::box(ones(2)), {}});
  for (std::uint64_t seed : {23u, 24u, 25u}) {
    QpObjective obj(qp_generate(2, 1, seed));
    FeasibleSet set = FeasibleSet::polytope(qp_polytope(obj.problem()));
    instances.push_back({std::move(obj), std::move(set), {}});
  }

  const double factor_f = -std::expm1(-1.0);  // 1 - e^-1 at gamma = 1
  const double factor_ga = 0.5;               // gamma^2 / (1 + gamma^2)
  RngStream rng(90215);
  double worst_f = 1e300, worst_ga = 1e300;
  int stationary_f = 0, stationary_ga = 0;

  for (Instance& inst : instances) {
    const auto opt =
        oracle::grid_opt_2d([&](const Vec& x) { return inst.obj.value(x); }, inst.set);
    const BoostConstants bc = boost_constants(inst.obj.meta(), 1.0);

    std::vector<Vec> starts = inst.extra_starts;
    starts.push_back(inst.set.project(zeros(2)));
    for (int i = 0; i < 3; ++i) starts.push_back(inst.set.sample(rng));

    for (const Vec& start : starts) {
      OfflineConfig cfg;
      cfg.T = 6000;
      cfg.grad_mode = GradMode::Quadrature;
      cfg.start = start;

      // ascent on the auxiliary objective, stationarity measured through it
      cfg.eta_override = 1.0 / bc.l_gamma;
      RngStream r1(1);
      const Vec xa = run_bga(inst.obj, inst.set, cfg, r1).final_point;
      const Vec ga = grad_F_ref(inst.obj, xa, 1.0);
      Vec dir = inst.set.lmo(ga);
      for (int i = 0; i < 2; ++i) dir[i] -= xa[i];
      if (dot(ga, dir) <= 1e-6) {
        ++stationary_f;
        worst_f = std::min(worst_f, inst.obj.value(xa) - (factor_f * opt.value - 1e-3));
      }

      // plain ascent on f itself
      cfg.eta_override = 1.0 / inst.obj.meta().L;
      RngStream r2(2);
      const Vec xg = run_ga(inst.obj, inst.set, cfg, r2).final_point;
      const Vec gg = inst.obj.grad(xg);
      Vec dirg = inst.set.lmo(gg);
      for (int i = 0; i < 2; ++i) dirg[i] -= xg[i];
      if (dot(gg, dirg) <= 1e-6) {
        ++stationary_ga;
        worst_ga = std::min(worst_ga, inst.obj.value(xg) - (factor_ga * opt.value - 1e-3));
      }
    }
  }
  const bool pass = stationary_f >= static_cast<int>(instances.size()) &&
                    stationary_ga >= static_cast<int>(instances.size()) && worst_f >= 0.0 &&
                    worst_ga >= 0.0;
  return {pass, "boosted stationary points " + std::to_string(stationary_f) +
                    ", min margin " + fmt(worst_f) + "; plain stationary points " +
                    std::to_string(stationary_ga) + ", min margin " + fmt(worst_ga)};
}

// ---- criterion 7: scaled local-maximum escape ----
Outcome check_figure1_scaled() {
  SpecialCaseObjective noisefree(5, 0.0);
  const FeasibleSet set = FeasibleSet::cardinality(11, 5.0);

  OfflineConfig ga_cfg;
  ga_cfg.T = 200;
  ga_cfg.start = noisefree.local_point();
  RngStream r1(1);
  const double ga_final = run_ga(noisefree, set, ga_cfg, r1).final_value;
  const bool ga_pinned = std::abs(ga_final - 6.0) <= 1e-6;

  SpecialCaseObjective noisy(5, 1.0);
  OfflineConfig bga_cfg;
  bga_cfg.T = 2000;
  bga_cfg.batch = 1;
  bga_cfg.start = noisy.local_point();
  std::vector<double> finals;
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
    RngStream rng(seed);
    finals.push_back(run_bga(noisy, set, bga_cfg, rng).final_value);
  }
  const double med = median(finals);
  const bool escaped = med >= 0.9 * 11.0;
  return {ga_pinned && escaped, "plain ascent final = " + fmt(ga_final) +
                                    " (stays at 6); boosted median final = " + fmt(med) +
                                    " (needs 9.9)"};
}

// ---- criterion 8: offline QP reproduction ----
Outcome check_figure3() {
  const QpObjective obj(qp_generate(25, 12, 7, 5.0));
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(obj.problem()));

  auto medians = [&](const std::string& name, int batch) {
    std::vector<double> at20, at_final;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      OfflineConfig cfg;
      cfg.T = 100;
      cfg.batch = batch;
      RngStream rng(mix_seed(seed, fnv1a64(name)));
      OfflineTrace tr;
      if (name == "ga")
        tr = run_ga(obj, set, cfg, rng);
      else
        tr = run_bga(obj, set, cfg, rng);
      at20.push_back(tr.values[19]);
      at_final.push_back(tr.values[99]);
    }
    return std::pair{median(at20), median(at_final)};
  };

  const auto [ga20, ga_final] = medians("ga", 1);
  const auto [bga20, bga_final] = medians("bga", 10);

  // the Frank-Wolfe baselines complete alongside
  OfflineConfig fw_cfg;
  fw_cfg.T = 100;
  fw_cfg.batch = 10;
  (void)run_cg(obj, set, fw_cfg);
  RngStream r_scg(3);
  (void)run_scg(obj, set, fw_cfg, r_scg);

  const bool pass = bga20 >= ga20 && bga_final >= 0.99 * ga_final;
  return {pass, "medians at t=20: boosted " + fmt(bga20) + " vs plain " + fmt(ga20) +
                    "; final: boosted " + fmt(bga_final) + " vs 0.99 * plain " +
                    fmt(0.99 * ga_final)};
}

// ---- criterion 9: online QP regret ordering and sublinearity ----
Outcome check_figure45() {
  const int T = 100;
  const int n = 25, m = 12;
  const std::uint64_t problem_seed = 7;

  const QpProblem base = qp_generate(n, m, problem_seed, 5.0);
  ObjectiveSeq objs;
  for (int t = 1; t <= T; ++t) {
    RngStream rng(mix_seed(problem_seed, t));
    QpProblem p;
    p.H = DenseMatrix::symmetric_from_lower(
        n, [&](std::size_t, std::size_t) { return -rng.uniform01(); });
    p.A = base.A;
    p.b = base.b;
    p.u = base.u;
    p.h = scaled(p.H.matvec(p.u), -1.0);
    p.noise_delta = 5.0;
    objs.push_back(std::make_shared<QpObjective>(std::move(p)));
  }
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(base));
  const HindsightResult hindsight = approx_hindsight_opt(objs, set, 300);
  const double alpha = -std::expm1(-1.0);

  std::ostringstream detail;
  bool pass = true;
  for (bool delayed : {true, false}) {
    std::map<std::string, std::vector<Vec>> curves;  // solver -> per-seed regret curve
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const DelaySchedule sched = [&] {
        if (!delayed) return schedule_none(T);
        RngStream rs(mix_seed(seed, fnv1a64("delay")));
        return schedule_uniform(T, 1, 5, rs);
      }();
      auto run_one = [&](const std::string& label, int batch, bool boosted) {
        OnlineConfig cfg;
        cfg.T = T;
        cfg.batch = batch;
        // experiment protocol: both ascent solvers run at 1/sqrt(T)
        if (boosted) cfg.eta_override = 1.0 / std::sqrt(static_cast<double>(T));
        RngStream rng(mix_seed(seed, fnv1a64(label)));
        const OnlineTrace tr = boosted ? run_obga(objs, set, sched, cfg, rng)
                                       : run_oga(objs, set, sched, cfg, rng);
        curves[label].push_back(eval_alpha_regret(tr, objs, alpha, hindsight.x_star));
      };
      run_one("obga10", 10, true);
      run_one("obga50", 50, true);
      run_one("oga10", 10, false);
      run_one("oga50", 50, false);
      // K-oracle baselines at reduced K = 50 run alongside (not gated)
      OnlineConfig mcfg;
      mcfg.T = T;
      mcfg.K = 50;
      RngStream rm1(mix_seed(seed, fnv1a64("meta_fw")));
      const OnlineTrace m1 = run_meta_fw(objs, set, sched, mcfg, rm1, false);
      curves["meta_fw"].push_back(eval_alpha_regret(m1, objs, alpha, hindsight.x_star));
      RngStream rm2(mix_seed(seed, fnv1a64("meta_fw_vr")));
      const OnlineTrace m2 = run_meta_fw(objs, set, sched, mcfg, rm2, true);
      curves["meta_fw_vr"].push_back(eval_alpha_regret(m2, objs, alpha, hindsight.x_star));
    }

    auto median_at = [&](const std::string& label, int t) {
      std::vector<double> vals;
      for (const Vec& c : curves[label]) vals.push_back(c[t - 1]);
      return median(vals);
    };
    const double obga50 = median_at("obga50", T), oga50 = median_at("oga50", T);
    const double obga10 = median_at("obga10", T), oga10 = median_at("oga10", T);
    const double r25 = median_at("obga50", 25), r100 = obga50;
    const double r25_b10 = median_at("obga10", 25);
    const bool ordering = obga50 < oga50 && obga10 < oga10;
    const bool sublinear = r100 / 100.0 < r25 / 25.0 && obga10 / 100.0 < r25_b10 / 25.0;
    pass = pass && ordering && sublinear;
    detail << (delayed ? "[delays 1..5] " : "[no delay] ") << "final medians: boosted(50) "
           << fmt(obga50) << " vs plain(50) " << fmt(oga50) << ", boosted(10) "
           << fmt(obga10) << " vs plain(10) " << fmt(oga10) << ", meta "
           << fmt(median_at("meta_fw", T)) << "/" << fmt(median_at("meta_fw_vr", T))
           << ", avg-regret drop " << fmt(r25 / 25.0) << " -> " << fmt(r100 / 100.0)
           << "; ";
  }
  return {pass, detail.str()};
}

// ---- criterion 10: production projections and linear oracles vs brute force ----
Outcome check_oracle_projection_cardinality() {
  RngStream rng(90216);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 3));
    Vec y(n);
    for (double& v : y) v = 3.0 * rng.uniform01() - 1.0;
    const double k = rng.uniform01() * n;
    worst = std::max(
        worst, dist2(project_cardinality(y, k), oracle::project_cardinality_bruteforce(y, k)));
  }
  return {worst < 1e-6, "max distance to oracle = " + fmt(worst) + " (limit 1e-6)"};
}

Outcome check_oracle_lmo_cardinality() {
  RngStream rng(90217);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 3));
    Vec v(n);
    for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
    const double k = rng.uniform01() * n;
    const double got = dot(v, lmo_cardinality(v, k));
    const double want = dot(v, oracle::lmo_cardinality_bruteforce(v, k));
    worst = std::max(worst, want - got);
  }
  return {worst < 1e-8, "max optimality gap = " + fmt(worst) + " (limit 1e-8)"};
}

Outcome check_oracle_projection_polytope() {
  RngStream rng(90218);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    Polytope p;
    p.A = DenseMatrix(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) p.A(i, j) = rng.uniform01();
    p.b = {0.5 + rng.uniform01(), 0.5 + rng.uniform01()};
    p.u = ones(2);
    Vec y{3.0 * rng.uniform01() - 1.0, 3.0 * rng.uniform01() - 1.0};
    worst =
        std::max(worst, dist2(project_polytope(y, p), oracle::project_polytope_bruteforce(y, p)));
  }
  return {worst < 1e-6, "max distance to oracle = " + fmt(worst) + " (limit 1e-6)"};
}

Outcome check_oracle_lmo_polytope() {
  RngStream rng(90219);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 3));
    Polytope p;
    p.A = DenseMatrix(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) p.A(i, j) = rng.uniform01();
    p.b = Vec(m);
    for (double& v : p.b) v = 0.5 + rng.uniform01();
    p.u = ones(n);
    Vec v(n);
    for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
    const double got = dot(v, lmo_polytope(v, p));
    const double want = oracle::lp_value_bruteforce(v, p);
    worst = std::max(worst, std::abs(got - want));
  }
  return {worst < 1e-8, "max LP value gap = " + fmt(worst) + " (limit 1e-8)"};
}

Outcome check_oracle_equivalence() {
  auto a = check_oracle_projection_cardinality();
  auto b = check_oracle_lmo_cardinality();
  auto c = check_oracle_projection_polytope();
  auto d = check_oracle_lmo_polytope();
  const bool pass = a.first && b.first && c.first && d.first;
  return {pass, "cardinality projection: " + a.second + "; cardinality lmo: " + b.second +
                    "; polytope projection: " + c.second + "; polytope lmo: " + d.second};
}

// ---- criterion 11: byte determinism of the experiment harness ----
ExperimentConfig reference_config() {
  return parse_config(R"({
    "problem": {"kind": "qp", "n": 8, "m": 4, "noise_delta": 2.0, "seed": 5},
    "solvers": [
      {"name": "bga", "T": 10, "batch": 3},
      {"name": "ga",  "T": 10},
      {"name": "cg",  "T": 10, "label": "cg"}
    ],
    "repeats": [1, 2]
  })");
}

Outcome check_csv_determinism() {
  const ExperimentConfig cfg = reference_config();
  const std::string a = csv_mask_wallclock(to_csv(run_experiment(cfg).rows));
  const std::string b = csv_mask_wallclock(to_csv(run_experiment(cfg).rows));
  const std::string c = csv_mask_wallclock(to_csv(run_experiment(cfg, 4).rows));
  const bool pass = a == b && a == c;
  return {pass, pass ? "identical bytes across reruns and a 4-thread run" : "outputs differ"};
}

// ---- further core checks ----
Outcome check_objective_structure() {
  RngStream rng(90220);
  const QpObjective qp(qp_generate(25, 12, 7, 0.0));
  const SpecialCaseObjective fk(5);
  const auto rq = verify_structure(qp, 1.0, 1000, 1e-9, rng);
  const auto rf = verify_structure(fk, 1.0, 1000, 1e-9, rng);

  double fd_worst = 0.0;
  auto fd_check = [&](const Objective& obj) {
    auto f = [&](const Vec& x) { return obj.value(x); };
    for (int rep = 0; rep < 100; ++rep) {
      Vec x(obj.meta().n);
      for (double& v : x) v = 0.05 + 0.9 * rng.uniform01();
      const Vec g = obj.grad(x);
      const Vec fd = oracle::fd_gradient(f, x);
      for (int i = 0; i < obj.meta().n; ++i)
        fd_worst = std::max(fd_worst, std::abs(g[i] - fd[i]));
    }
  };
  fd_check(qp);
  fd_check(fk);

  const bool pass = rq.violations.empty() && rf.violations.empty() && fd_worst < 1e-6;
  return {pass, "structure violations: " + std::to_string(rq.violations.size()) + " (qp), " +
                    std::to_string(rf.violations.size()) +
                    " (coverage); max fd gradient error = " + fmt(fd_worst)};
}

Outcome check_feasible_properties() {
  RngStream rng(90221);
  const QpProblem qp = qp_generate(6, 3, 11);
  const std::vector<FeasibleSet> sets = {
      FeasibleSet::box(ones(6)),
      FeasibleSet::cardinality(6, 2.5),
      FeasibleSet::polytope(qp_polytope(qp)),
  };
  double worst_idem = 0.0, worst_nonexp = 0.0, worst_obtuse = 0.0;
  bool member = true;
  for (const FeasibleSet& set : sets) {
    for (int rep = 0; rep < 1000; ++rep) {
      Vec y1(6), y2(6);
      for (double& v : y1) v = 4.0 * rng.uniform01() - 1.5;
      for (double& v : y2) v = 4.0 * rng.uniform01() - 1.5;
      const Vec p1 = set.project(y1);
      const Vec p2 = set.project(y2);
      member = member && set.contains(p1, 1e-8);
      worst_idem = std::max(worst_idem, dist2(set.project(p1), p1));
      worst_nonexp = std::max(worst_nonexp, dist2(p1, p2) - dist2(y1, y2));
      const Vec z = set.sample(rng);
      double inner = 0.0;
      for (int i = 0; i < 6; ++i) inner += (p1[i] - y1[i]) * (z[i] - p1[i]);
      worst_obtuse = std::min(worst_obtuse, inner);
    }
  }
  const bool pass =
      member && worst_idem <= 1e-9 && worst_nonexp <= 1e-9 && worst_obtuse >= -1e-8;
  return {pass, "idempotence " + fmt(worst_idem) + ", expansiveness " + fmt(worst_nonexp) +
                    ", obtuse-angle min " + fmt(worst_obtuse) +
                    (member ? ", membership ok" : ", membership violated")};
}

Outcome check_online_causality() {
  RngStream rs(90222);
  // conservation across random schedules
  for (int rep = 0; rep < 20; ++rep) {
    const DelaySchedule s = schedule_uniform(60, 1, 7, rs);
    std::size_t delivered = 0;
    for (const auto& bucket : s.buckets) delivered += bucket.size();
    if (delivered + s.dropped.size() != 60) return {false, "feedback not conserved"};
  }

  const int T = 8;
  ObjectiveSeq objs;
  const QpProblem base = qp_generate(5, 3, 13, 1.0);
  for (int t = 1; t <= T; ++t) {
    RngStream rng(mix_seed(13, t));
    QpProblem p;
    p.H = DenseMatrix::symmetric_from_lower(
        5, [&](std::size_t, std::size_t) { return -rng.uniform01(); });
    p.A = base.A;
    p.b = base.b;
    p.u = base.u;
    p.h = scaled(p.H.matvec(p.u), -1.0);
    p.noise_delta = 1.0;
    objs.push_back(std::make_shared<QpObjective>(std::move(p)));
  }
  const FeasibleSet set = FeasibleSet::polytope(qp_polytope(base));
  OnlineConfig cfg;
  cfg.T = T;

  RngStream r1(3), r2(3), r3(3);
  const DelaySchedule slow = schedule_explicit({5, 1, 1, 1, 1, 1, 1, 1});
  const DelaySchedule fast = schedule_explicit({2, 1, 1, 1, 1, 1, 1, 1});
  const OnlineTrace a = run_obga(objs, set, slow, cfg, r1);
  const OnlineTrace b = run_obga(objs, set, slow, cfg, r2);
  const OnlineTrace c = run_obga(objs, set, fast, cfg, r3);
  for (int t = 0; t < T; ++t)
    if (a.actions[t] != b.actions[t]) return {false, "same-seed replay diverged"};
  if (a.actions[0] != c.actions[0] || a.actions[1] != c.actions[1])
    return {false, "early feedback changed pre-arrival actions"};
  if (dist2(a.actions[2], c.actions[2]) <= 1e-12)
    return {false, "early feedback had no effect at the arrival round"};
  return {true, "replay stable, delay shrink affects only post-arrival rounds"};
}

Outcome check_select_index() {
  RngStream rng(90223);
  for (int i = 0; i < 100; ++i)
    if (select_index({0.0, 1.0, 0.0}, rng) != 2) return {false, "point mass missed"};
  int ones_count = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    if (select_index({1.0, 1.0}, rng) == 1) ++ones_count;
  const double freq = static_cast<double>(ones_count) / draws;
  return {std::abs(freq - 0.5) < 0.005,
          "uniform pair frequency = " + fmt(freq) + " (want 0.5 +- 0.005)"};
}

Outcome check_spectral_norm_oracle() {
  RngStream rng(90224);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const DenseMatrix m = DenseMatrix::symmetric_from_lower(
        3, [&](std::size_t, std::size_t) { return 2.0 * rng.uniform01() - 1.0; });
    worst = std::max(worst, std::abs(spectral_norm(m) - oracle::cubic_eig_maxabs_3x3(m)));
  }
  return {worst < 1e-8, "max eigenvalue error = " + fmt(worst) + " (limit 1e-8)"};
}

Outcome check_quadrature() {
  const QuadRule r = gauss_legendre01(8);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::exp(r.nodes[i]);
  const double err = std::abs(acc - (std::exp(1.0) - 1.0));
  return {err < 1e-12, "exp-integral error = " + fmt(err) + " (limit 1e-12)"};
}

}  // namespace

std::vector<CheckResult> run_acceptance() {
  std::vector<CheckResult> out;
  out.push_back(timed("1-unbiasedness", check_unbiasedness));
  out.push_back(timed("2-variance-bound", check_variance_bound));
  out.push_back(timed("3-key-inequality", check_key_inequality));
  out.push_back(timed("4-aux-smoothness", check_aux_smoothness));
  out.push_back(timed("5-aux-boundedness", check_aux_bound));
  out.push_back(timed("6-stationary-ratios", check_stationary_ratios));
  out.push_back(timed("7-figure1-scaled", check_figure1_scaled));
  out.push_back(timed("8-figure3-offline-qp", check_figure3));
  out.push_back(timed("9-figure45-online-qp", check_figure45));
  out.push_back(timed("10-oracle-equivalence", check_oracle_equivalence));
  out.push_back(timed("11-csv-determinism", check_csv_determinism));
  return out;
}

std::vector<CheckResult> run_suite(const std::string& suite) {
  std::vector<CheckResult> out;
  const bool core = suite == "core" || suite == "all";
  const bool numeric = suite == "numeric" || suite == "all";
  const bool experiments = suite == "experiments" || suite == "all";
  if (!core && !numeric && !experiments)
    throw std::invalid_argument("run_suite: unknown suite '" + suite + "'");

  if (core) {
    out.push_back(timed("boost-unbiasedness", check_unbiasedness));
    out.push_back(timed("boost-variance-bound", check_variance_bound));
    out.push_back(timed("boost-key-inequality", check_key_inequality));
    out.push_back(timed("aux-smoothness", check_aux_smoothness));
    out.push_back(timed("aux-boundedness", check_aux_bound));
    out.push_back(timed("objective-structure", check_objective_structure));
    out.push_back(timed("feasible-properties", check_feasible_properties));
    out.push_back(timed("online-causality", check_online_causality));
    out.push_back(timed("select-index", check_select_index));
  }
  if (numeric) {
    out.push_back(timed("oracle-projection-cardinality", check_oracle_projection_cardinality));
    out.push_back(timed("oracle-lmo-cardinality", check_oracle_lmo_cardinality));
    out.push_back(timed("oracle-projection-polytope", check_oracle_projection_polytope));
    out.push_back(timed("oracle-lmo-polytope", check_oracle_lmo_polytope));
    out.push_back(timed("spectral-norm-oracle", check_spectral_norm_oracle));
    out.push_back(timed("quadrature-exactness", check_quadrature));
  }
  if (experiments) {
    out.push_back(timed("stationary-ratios", check_stationary_ratios));
    out.push_back(timed("figure1-scaled", check_figure1_scaled));
    out.push_back(timed("figure3-offline-qp", check_figure3));
    out.push_back(timed("figure45-online-qp", check_figure45));
    out.push_back(timed("csv-determinism", check_csv_determinism));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return true;
}

void print_results(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    std::printf("%s %-28s %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str(), r.seconds);
}

}  // namespace submax
