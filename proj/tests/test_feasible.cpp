#include <doctest.h>

#include <cmath>

#include "submax/feasible.hpp"
#include "submax/oracles.hpp"
#include "submax/problems.hpp"

using namespace submax;

namespace {

Polytope random_polytope(int n, int m, RngStream& rng) {
  Polytope p;
  p.A = DenseMatrix(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) p.A(i, j) = rng.uniform01();
  p.b = Vec(m);
  for (double& v : p.b) v = 0.5 + rng.uniform01();
  p.u = ones(n);
  return p;
}

}  // namespace

TEST_SUITE("feasible") {

TEST_CASE("project_cardinality: fixed cases") {
  const Vec a = project_cardinality({0.9, 0.9, 0.9}, 1.5);
  for (double v : a) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));

  const Vec b = project_cardinality({2.0, 2.0, 0.0}, 2.0);
  CHECK(b[0] == doctest::Approx(1.0));
  CHECK(b[1] == doctest::Approx(1.0));
  CHECK(b[2] == doctest::Approx(0.0));

  const Vec c = project_cardinality({0.2, 0.4, 0.9}, 2.0);
  CHECK(c[0] == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(c[1] == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(c[2] == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(project_cardinality(zeros(3), -0.5), InfeasibleError);
  CHECK_THROWS_AS(project_cardinality(zeros(3), 3.5), InfeasibleError);
}

TEST_CASE("project_cardinality: matches the clip-pattern oracle") {
  RngStream rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 2));
    Vec y(n);
    for (double& v : y) v = 3.0 * rng.uniform01() - 1.0;
    const double k = rng.uniform01() * n;
    const Vec got = project_cardinality(y, k);
    const Vec want = oracle::project_cardinality_bruteforce(y, k);
    CHECK(dist2(got, want) < 1e-6);
  }
}

TEST_CASE("lmo_cardinality: fixed cases and tie-break") {
  CHECK(lmo_cardinality({3.0, 1.0, 2.0}, 2.0) == Vec{1.0, 0.0, 1.0});
  CHECK(lmo_cardinality({3.0, 1.0, 2.0}, 1.5) == Vec{1.0, 0.0, 0.5});
  CHECK(lmo_cardinality({5.0, 5.0}, 1.0) == Vec{1.0, 0.0});  // lowest index wins ties
}

TEST_CASE("lmo_cardinality: matches vertex enumeration") {
  RngStream rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 3));
    Vec v(n);
    for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
    const double k = rng.uniform01() * n;
    const Vec got = lmo_cardinality(v, k);
    const Vec want = oracle::lmo_cardinality_bruteforce(v, k);
    CHECK(dot(v, got) >= dot(v, want) - 1e-8);
    CHECK(std::abs(sum(got) - k) < 1e-12);
  }
}

TEST_CASE("project_polytope: identity on feasible points, 1-d halfspace") {
  Polytope p;
  p.A = DenseMatrix(1, 1);
  p.A(0, 0) = 2.0;
  p.b = {1.0};
  p.u = {1.0};
  CHECK(project_polytope({0.3}, p)[0] == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(project_polytope({2.0}, p)[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("project_polytope: matches active-set enumeration on random 2-d instances") {
  RngStream rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    Polytope p = random_polytope(2, 2, rng);
    Vec y(2);
    for (double& v : y) v = 3.0 * rng.uniform01() - 1.0;
    const Vec got = project_polytope(y, p);
    const Vec want = oracle::project_polytope_bruteforce(y, p);
    CHECK(dist2(got, want) < 1e-6);
  }
}

TEST_CASE("project_polytope: sweep budget error carries the best iterate") {
  Polytope p;
  p.A = DenseMatrix(1, 2);
  p.A(0, 0) = 1.0;
  p.A(0, 1) = 1.0;
  p.b = {0.5};
  p.u = {1.0, 1.0};
  try {
    project_polytope({5.0, 5.0}, p, 1e-16, 1);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_iterate().size() == 2);
    CHECK(e.residual() >= 0.0);
  }
}

TEST_CASE("lmo_polytope: fixed cases") {
  Polytope p;
  p.A = DenseMatrix(1, 1);
  p.A(0, 0) = 2.0;
  p.b = {1.0};
  p.u = {1.0};
  CHECK(lmo_polytope({1.0}, p)[0] == doctest::Approx(0.5).epsilon(1e-9));

  Polytope q = p;
  CHECK(lmo_polytope({-1.0}, q)[0] == doctest::Approx(0.0));  // origin optimal for v <= 0

  RngStream rng(9);
  Polytope r = random_polytope(3, 2, rng);
  const Vec s = lmo_polytope({-0.5, -0.1, 0.0}, r);
  for (double v : s) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("lmo_polytope: optimal value matches vertex enumeration") {
  RngStream rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 3));
    Polytope p = random_polytope(n, m, rng);
    Vec v(n);
    for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
    const Vec got = lmo_polytope(v, p);
    const double want = oracle::lp_value_bruteforce(v, p);
    CHECK(std::abs(dot(v, got) - want) < 1e-8);
    // returned point is feasible
    for (std::size_t i = 0; i < p.A.rows(); ++i) {
      double ax = 0.0;
      for (int j = 0; j < n; ++j) ax += p.A(i, j) * got[j];
      CHECK(ax <= p.b[i] + 1e-9);
    }
  }
}

TEST_CASE("set_geometry") {
  CHECK(set_geometry(FeasibleSet::box(ones(4))).diameter == doctest::Approx(2.0));
  CHECK(set_geometry(FeasibleSet::cardinality(5, 2.0)).diameter == doctest::Approx(2.0));
  CHECK(set_geometry(FeasibleSet::cardinality(5, 2.5)).diameter ==
        doctest::Approx(std::sqrt(5.0)));
  RngStream rng(13);
  Polytope p = random_polytope(25, 12, rng);
  p.b = ones(12);
  CHECK(set_geometry(FeasibleSet::polytope(p)).diameter == doctest::Approx(5.0));
}

TEST_CASE("cardinality diameter bound is attained by vertex pairs") {
  const FeasibleSet s = FeasibleSet::cardinality(5, 2.0);
  // swap-two extremal pair
  const Vec a{1.0, 1.0, 0.0, 0.0, 0.0};
  const Vec b{0.0, 0.0, 1.0, 1.0, 0.0};
  CHECK(dist2(a, b) == doctest::Approx(s.diameter()));
}

TEST_CASE("projection properties: idempotent, nonexpansive, member, obtuse") {
  RngStream rng(17);
  Polytope p = random_polytope(6, 3, rng);
  const std::vector<FeasibleSet> sets = {
      FeasibleSet::box(ones(6)),
      FeasibleSet::cardinality(6, 2.5),
      FeasibleSet::polytope(p),
  };
  for (const FeasibleSet& set : sets) {
    for (int rep = 0; rep < 1000; ++rep) {
      Vec y1(6), y2(6);
      for (double& v : y1) v = 4.0 * rng.uniform01() - 1.5;
      for (double& v : y2) v = 4.0 * rng.uniform01() - 1.5;
      const Vec p1 = set.project(y1);
      const Vec p2 = set.project(y2);
      CHECK(set.contains(p1, 1e-8));
      CHECK(dist2(set.project(p1), p1) <= 1e-9);
      CHECK(dist2(p1, p2) <= dist2(y1, y2) + 1e-9);

      const Vec z = set.sample(rng);
      double inner = 0.0;
      for (int i = 0; i < 6; ++i) inner += (p1[i] - y1[i]) * (z[i] - p1[i]);
      CHECK(inner >= -1e-8);
    }
  }
}

TEST_CASE("lmo optimality against sampled feasible points") {
  RngStream rng(19);
  Polytope p = random_polytope(5, 3, rng);
  const std::vector<FeasibleSet> sets = {
      FeasibleSet::box(ones(5)),
      FeasibleSet::cardinality(5, 2.0),
      FeasibleSet::polytope(p),
  };
  for (const FeasibleSet& set : sets) {
    for (int rep = 0; rep < 200; ++rep) {
      Vec v(5);
      for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
      const Vec s = set.lmo(v);
      CHECK(set.contains(s, 1e-8));
      const Vec x = set.sample(rng);
      CHECK(dot(v, s) >= dot(v, x) - 1e-8);
    }
  }
}

TEST_CASE("feasible sampling stays in the set") {
  RngStream rng(23);
  Polytope p = random_polytope(4, 2, rng);
  const FeasibleSet set = FeasibleSet::polytope(p);
  for (int rep = 0; rep < 200; ++rep) CHECK(set.contains(set.sample(rng), 1e-8));
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(FeasibleSet::cardinality(3, 4.0), InfeasibleError);
  Polytope bad;
  bad.A = DenseMatrix(1, 2);
  bad.A(0, 0) = -1.0;
  bad.b = {1.0};
  bad.u = ones(2);
  CHECK_THROWS_AS(FeasibleSet::polytope(bad), std::invalid_argument);
}

}  // TEST_SUITE
