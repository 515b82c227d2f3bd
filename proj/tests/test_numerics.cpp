#include <doctest.h>

#include <cmath>

#include "submax/matrix.hpp"
#include "submax/oracles.hpp"
#include "submax/quadrature.hpp"
#include "submax/rng.hpp"
#include "submax/vec.hpp"

using namespace submax;

TEST_SUITE("numerics") {

TEST_CASE("rng: equal seeds give bit-identical uniforms") {
  RngStream a(12345), b(12345);
  for (int i = 0; i < 10000; ++i) CHECK(a.uniform01() == b.uniform01());
}

TEST_CASE("rng: uniform01 stays in [0, 1)") {
  RngStream r(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("rng: gaussian moments") {
  RngStream r(42);
  const int n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = r.gaussian();
    s += g;
    s2 += g * g;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("clip_box") {
  CHECK(clip_box({0.5}, {0.0}, {1.0}) == Vec{0.5});
  CHECK(clip_box({-1.0, 2.0}, {0.0, 0.0}, {1.0, 1.0}) == Vec{0.0, 1.0});
  CHECK(clip_box({0.3, 1.7, -0.2}, zeros(3), ones(3)) == Vec{0.3, 1.0, 0.0});
  CHECK_THROWS_AS(clip_box({0.0}, zeros(2), ones(2)), std::invalid_argument);
}

TEST_CASE("spectral_norm: fixed matrices") {
  CHECK(spectral_norm(DenseMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-9));

  DenseMatrix d(2, 2);
  d(0, 0) = -3.0;
  d(1, 1) = 1.0;
  CHECK(spectral_norm(d) == doctest::Approx(3.0).epsilon(1e-9));

  // all-ones start is an exact eigenvector here; the second start must save it
  DenseMatrix swap(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  CHECK(spectral_norm(swap) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spectral_norm: random symmetric 3x3 matches the cubic oracle") {
  RngStream rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const DenseMatrix m = DenseMatrix::symmetric_from_lower(
        3, [&](std::size_t, std::size_t) { return 2.0 * rng.uniform01() - 1.0; });
    const double want = oracle::cubic_eig_maxabs_3x3(m);
    CHECK(std::abs(spectral_norm(m) - want) < 1e-8);
  }
}

TEST_CASE("spectral_norm: dominates the Rayleigh quotient of random probes") {
  RngStream rng(11);
  const DenseMatrix m = DenseMatrix::symmetric_from_lower(
      6, [&](std::size_t, std::size_t) { return 2.0 * rng.uniform01() - 1.0; });
  const double nrm = spectral_norm(m);
  for (int rep = 0; rep < 200; ++rep) {
    Vec v(6);
    for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
    const double rayleigh = std::abs(dot(v, m.matvec(v))) / dot(v, v);
    CHECK(nrm >= rayleigh - 1e-9);
  }
}

TEST_CASE("spectral_norm: rejects bad input") {
  CHECK_THROWS_AS(spectral_norm(DenseMatrix(2, 3)), std::invalid_argument);
  DenseMatrix asym(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(spectral_norm(asym), std::invalid_argument);
  CHECK_THROWS_AS(spectral_norm(DenseMatrix::identity(2), 0.0), std::invalid_argument);
}

TEST_CASE("gauss_legendre01: midpoint rule at m = 1") {
  const QuadRule r = gauss_legendre01(1);
  CHECK(r.nodes.size() == 1);
  CHECK(r.nodes[0] == doctest::Approx(0.5));
  CHECK(r.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("gauss_legendre01: weights sum to one, degree-1 exactness") {
  for (int m : {1, 2, 5, 8, 16, 64}) {
    const QuadRule r = gauss_legendre01(m);
    CHECK(sum(r.weights) == doctest::Approx(1.0).epsilon(1e-13));
    double integral_z = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) integral_z += r.weights[i] * r.nodes[i];
    CHECK(integral_z == doctest::Approx(0.5).epsilon(1e-13));  // int_0^1 z dz
  }
}

TEST_CASE("gauss_legendre01: exp integral to 1e-12 at m = 8") {
  const QuadRule r = gauss_legendre01(8);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::exp(r.nodes[i]);
  CHECK(std::abs(acc - (std::exp(1.0) - 1.0)) < 1e-12);  // antiderivative oracle: e - 1
}

TEST_CASE("gauss_legendre01: m out of range") {
  CHECK_THROWS_AS(gauss_legendre01(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre01(65), std::invalid_argument);
}

TEST_CASE("composite rule: panel weights still sum to one") {
  const QuadRule r = composite_gauss_legendre01(8, 8);
  CHECK(r.nodes.size() == 64);
  CHECK(sum(r.weights) == doctest::Approx(1.0).epsilon(1e-13));
}

}  // TEST_SUITE
