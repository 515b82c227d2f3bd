#include <doctest.h>

#include <cmath>

#include "submax/oracles.hpp"
#include "submax/problems.hpp"

using namespace submax;

namespace {

// negative control: a convex probe that is not submodular-monotone
class ConvexProbe final : public Objective {
 public:
  explicit ConvexProbe(int n) { meta_ = make_meta(ones(n), 2.0, 1.0, 0.0); }
  double value(const Vec& x) const override { return dot(x, x); }
  Vec grad(const Vec& x) const override { return scaled(x, 2.0); }
};

}  // namespace

TEST_SUITE("objectives") {

TEST_CASE("special case: closed-form values at the corner points") {
  const int k = 2;
  CHECK(special_case_eval(k, zeros(5)).first == doctest::Approx(0.0));  // f(0) = 0

  SpecialCaseObjective fk(k);
  CHECK(fk.value(fk.local_point()) == doctest::Approx(3.0));   // k + 1
  CHECK(fk.value(fk.global_point()) == doctest::Approx(5.0));  // 2k + 1
}

TEST_CASE("special case: analytic gradient matches central differences") {
  SpecialCaseObjective fk(3);
  RngStream rng(5);
  auto f = [&](const Vec& x) { return fk.value(x); };
  for (int rep = 0; rep < 25; ++rep) {
    Vec x(7);
    for (double& v : x) v = 0.1 + 0.8 * rng.uniform01();
    const Vec g = fk.grad(x);
    const Vec fd = oracle::fd_gradient(f, x);
    for (int i = 0; i < 7; ++i) CHECK(std::abs(g[i] - fd[i]) < 1e-6);
  }
}

TEST_CASE("special case: domain and argument errors") {
  CHECK_THROWS_AS(special_case_eval(2, {2.0, 0.0, 0.0, 0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(special_case_eval(2, zeros(4)), std::invalid_argument);
  CHECK_THROWS_AS(SpecialCaseObjective(0), std::invalid_argument);
}

TEST_CASE("qp_generate: deterministic, entries in range, grad(u) = 0") {
  const QpProblem p1 = qp_generate(25, 12, 99, 5.0);
  const QpProblem p2 = qp_generate(25, 12, 99, 5.0);
  CHECK(p1.H.data() == p2.H.data());
  CHECK(p1.A.data() == p2.A.data());

  for (double v : p1.H.data()) {
    CHECK(v <= 0.0);
    CHECK(v >= -1.0);
  }
  for (double v : p1.A.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(p1.H.is_symmetric());

  const Vec g_at_u = qp_eval(p1, p1.u).second;
  for (double v : g_at_u) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("qp_eval: corner values and the 2-d fixture gradient") {
  const QpProblem p = qp_generate(6, 3, 4);
  CHECK(qp_eval(p, zeros(6)).first == doctest::Approx(0.0));

  // f(u) = -u'Hu/2 >= 0 since H <= 0 entrywise
  const double fu = qp_eval(p, p.u).first;
  const double direct = -0.5 * dot(p.u, p.H.matvec(p.u));
  CHECK(fu == doctest::Approx(direct));
  CHECK(fu >= 0.0);

  DenseMatrix neg_eye(2, 2);
  neg_eye(0, 0) = neg_eye(1, 1) = -1.0;
  const QpProblem fx = qp_fixture(neg_eye);
  const auto [v, g] = qp_eval(fx, {0.3, 0.8});
  CHECK(g[0] == doctest::Approx(0.7));  // H(x - u) = u - x
  CHECK(g[1] == doctest::Approx(0.2));
  CHECK(v == doctest::Approx(0.3 + 0.8 - 0.5 * (0.09 + 0.64)));

  CHECK_THROWS_AS(qp_eval(fx, zeros(3)), std::invalid_argument);
}

TEST_CASE("noisy_grad: zero noise is exact, batches unbiased") {
  DenseMatrix neg_eye(2, 2);
  neg_eye(0, 0) = neg_eye(1, 1) = -1.0;
  QpObjective clean(qp_fixture(neg_eye, 0.0));
  RngStream rng(3);
  const Vec x{0.25, 0.5};
  CHECK(clean.noisy_grad(x, 1, rng) == clean.grad(x));
  CHECK(clean.noisy_grad(x, 7, rng) == clean.grad(x));

  QpObjective noisy(qp_fixture(neg_eye, 1.0));
  const int b = 100000;
  const Vec got = noisy.noisy_grad(x, b, rng);
  const Vec want = noisy.grad(x);
  const double bound = 4.0 / std::sqrt(static_cast<double>(b));  // 4 sigma / sqrt(B)
  CHECK(std::abs(got[0] - want[0]) < bound);
  CHECK(std::abs(got[1] - want[1]) < bound);
}

TEST_CASE("noisy_grad: batch-mean variance tracks delta^2 / B") {
  DenseMatrix h(1, 1);
  h(0, 0) = -1.0;
  QpObjective obj(qp_fixture(h, 1.0));
  RngStream rng(17);
  const Vec x{0.5};
  const int batch = 10000, reps = 2000;
  const double mean_true = obj.grad(x)[0];
  double acc = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double d = obj.noisy_grad(x, batch, rng)[0] - mean_true;
    acc += d * d;
  }
  const double var = acc / reps;
  CHECK(std::abs(var - 1.0 / batch) < 0.1 / batch);  // within 10%
}

TEST_CASE("structure: both families pass, the convex probe fails") {
  RngStream rng(23);

  QpObjective qp(qp_generate(6, 3, 2));
  CHECK(verify_structure(qp, 1.0, 1000, 1e-9, rng).violations.empty());

  SpecialCaseObjective fk(3);
  CHECK(verify_structure(fk, 1.0, 1000, 1e-9, rng).violations.empty());

  ConvexProbe probe(4);
  CHECK_FALSE(verify_structure(probe, 1.0, 300, 1e-9, rng).violations.empty());
}

TEST_CASE("structure: gamma estimate is a sane lower bound") {
  RngStream rng(29);
  QpObjective qp(qp_generate(5, 2, 8));
  const StructureReport rep = verify_structure(qp, 1.0, 500, 1e-9, rng);
  CHECK(rep.gamma_hat > 0.0);
  CHECK(rep.gamma_hat <= 1.0 + 1e-12);
}

TEST_CASE("monotone: gradients stay nonnegative on the box") {
  RngStream rng(31);
  QpObjective qp(qp_generate(8, 3, 5));
  SpecialCaseObjective fk(4);
  for (int rep = 0; rep < 1000; ++rep) {
    Vec xq(8), xs(9);
    for (double& v : xq) v = rng.uniform01();
    for (double& v : xs) v = rng.uniform01();
    for (double v : qp.grad(xq)) CHECK(v >= -1e-12);
    for (double v : fk.grad(xs)) CHECK(v >= -1e-12);
  }
}

TEST_CASE("smoothness: gradient steps bounded by meta.L") {
  RngStream rng(37);
  QpObjective qp(qp_generate(8, 3, 6));
  SpecialCaseObjective fk(4);
  auto check_pairs = [&](const Objective& obj) {
    const int n = obj.meta().n;
    for (int rep = 0; rep < 300; ++rep) {
      Vec x(n), y(n);
      for (double& v : x) v = rng.uniform01();
      for (double& v : y) v = rng.uniform01();
      const double lhs = dist2(obj.grad(x), obj.grad(y));
      CHECK(lhs <= obj.meta().L * dist2(x, y) * (1.0 + 1e-9) + 1e-12);
    }
  };
  check_pairs(qp);
  check_pairs(fk);
}

TEST_CASE("qp gradient matches central differences") {
  QpObjective qp(qp_generate(7, 3, 12));
  RngStream rng(41);
  auto f = [&](const Vec& x) { return qp.value(x); };
  for (int rep = 0; rep < 100; ++rep) {
    Vec x(7);
    for (double& v : x) v = rng.uniform01();
    const Vec g = qp.grad(x);
    const Vec fd = oracle::fd_gradient(f, x);
    for (int i = 0; i < 7; ++i) CHECK(std::abs(g[i] - fd[i]) < 1e-6);
  }
}

TEST_CASE("average objective is the pointwise mean") {
  std::vector<std::shared_ptr<const Objective>> parts;
  for (int s = 0; s < 3; ++s)
    parts.push_back(std::make_shared<QpObjective>(qp_generate(4, 2, 100 + s)));
  AverageObjective avg(parts);
  RngStream rng(2);
  Vec x(4);
  for (double& v : x) v = rng.uniform01();
  double want = 0.0;
  for (const auto& p : parts) want += p->value(x);
  want /= 3.0;
  CHECK(avg.value(x) == doctest::Approx(want).epsilon(1e-12));
}

}  // TEST_SUITE
