#include "submax/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace submax {

namespace {

void check_unit_box(const Vec& x) {
  for (double v : x)
    if (v < 0.0 || v > 1.0) throw std::domain_error("special_case_eval: x outside [0, 1]^n");
}

// Hessian of the coverage objective at the origin; its entries dominate the
// Hessian magnitude everywhere on the box, so its spectral norm is a valid
// global smoothness constant.
DenseMatrix special_case_hessian_at_origin(int k) {
  const int n = 2 * k + 1;
  DenseMatrix h(n, n);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j)
      if (i != j) h(i, j) = -1.0;
    h(i, n - 1) = -2.0;
    h(n - 1, i) = -2.0;
  }
  return h;
}

}  // namespace

std::pair<double, Vec> special_case_eval(int k, const Vec& x) {
  if (k < 1) throw std::invalid_argument("special_case_eval: k must be >= 1");
  const int n = 2 * k + 1;
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("special_case_eval: expected dimension 2k + 1");
  check_unit_box(x);

  const double w = x[n - 1];
  double s_head = 0.0;
  for (int i = 0; i < k; ++i) s_head += x[i];
  double s_mid = 0.0;
  for (int i = k; i < 2 * k; ++i) s_mid += x[i];

  // prefix/suffix products of (1 - x_i) over the first k coordinates, so the
  // leave-one-out products need no division
  Vec pre(k + 1, 1.0), suf(k + 1, 1.0);
  for (int i = 0; i < k; ++i) pre[i + 1] = pre[i] * (1.0 - x[i]);
  for (int i = k - 1; i >= 0; --i) suf[i] = suf[i + 1] * (1.0 - x[i]);
  const double prod = pre[k];

  const double value =
      k + 1 - (1.0 - w) * prod - (1.0 - w) * (k - s_head) + s_mid;

  Vec g(n, 0.0);
  for (int i = 0; i < k; ++i) {
    const double leave_out = pre[i] * suf[i + 1];
    g[i] = (1.0 - w) * (leave_out + 1.0);
  }
  for (int i = k; i < 2 * k; ++i) g[i] = 1.0;
  g[n - 1] = prod + (k - s_head);
  return {value, std::move(g)};
}

SpecialCaseObjective::SpecialCaseObjective(int k, double noise_delta) : k_(k) {
  if (k < 1) throw std::invalid_argument("SpecialCaseObjective: k must be >= 1");
  if (noise_delta < 0.0)
    throw std::invalid_argument("SpecialCaseObjective: noise_delta must be >= 0");
  const int n = 2 * k + 1;
  const double L = spectral_norm(special_case_hessian_at_origin(k));
  meta_ = make_meta(ones(n), L, 1.0, noise_delta * std::sqrt(static_cast<double>(n)));
  noise_delta_ = noise_delta;
}

Vec SpecialCaseObjective::local_point() const {
  Vec x(2 * k_ + 1, 0.0);
  for (int i = 0; i < k_; ++i) x[i] = 1.0;
  return x;
}

Vec SpecialCaseObjective::global_point() const {
  Vec x(2 * k_ + 1, 0.0);
  for (int i = k_; i < 2 * k_ + 1; ++i) x[i] = 1.0;
  return x;
}

double SpecialCaseObjective::value(const Vec& x) const { return special_case_eval(k_, x).first; }

Vec SpecialCaseObjective::grad(const Vec& x) const { return special_case_eval(k_, x).second; }

QpProblem qp_generate(int n, int m, std::uint64_t seed, double noise_delta) {
  if (n < 1 || m < 1) throw std::invalid_argument("qp_generate: n and m must be >= 1");
  RngStream rng(seed);
  QpProblem p;
  p.H = DenseMatrix::symmetric_from_lower(
      static_cast<std::size_t>(n), [&](std::size_t, std::size_t) { return -rng.uniform01(); });
  p.A = DenseMatrix(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) p.A(i, j) = rng.uniform01();
  p.b = ones(m);
  p.u = ones(n);
  p.h = scaled(p.H.matvec(p.u), -1.0);
  p.noise_delta = noise_delta;
  return p;
}

QpProblem qp_fixture(DenseMatrix H, double noise_delta) {
  if (!H.is_symmetric()) throw std::invalid_argument("qp_fixture: H must be symmetric");
  QpProblem p;
  const std::size_t n = H.rows();
  p.A = DenseMatrix(0, n);
  p.b = {};
  p.u = ones(n);
  p.h = scaled(H.matvec(p.u), -1.0);
  p.H = std::move(H);
  p.noise_delta = noise_delta;
  return p;
}

std::pair<double, Vec> qp_eval(const QpProblem& p, const Vec& x) {
  if (x.size() != p.H.rows()) throw std::invalid_argument("qp_eval: dimension mismatch");
  Vec hx = p.H.matvec(x);
  const double value = 0.5 * dot(x, hx) + dot(p.h, x);
  for (std::size_t i = 0; i < hx.size(); ++i) hx[i] += p.h[i];
  return {value, std::move(hx)};
}

QpObjective::QpObjective(QpProblem p) : p_(std::move(p)) {
  const double L = spectral_norm(p_.H);
  const int n = static_cast<int>(p_.H.rows());
  meta_ = make_meta(p_.u, L, 1.0, p_.noise_delta * std::sqrt(static_cast<double>(n)));
  noise_delta_ = p_.noise_delta;
}

double QpObjective::value(const Vec& x) const { return qp_eval(p_, x).first; }

Vec QpObjective::grad(const Vec& x) const { return qp_eval(p_, x).second; }

AverageObjective::AverageObjective(std::vector<std::shared_ptr<const Objective>> parts)
    : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("AverageObjective: empty sequence");
  const ObjectiveMeta& first = parts_[0]->meta();
  double l_mean = 0.0;
  double gamma_min = 1.0;
  for (const auto& p : parts_) {
    if (p->meta().n != first.n)
      throw std::invalid_argument("AverageObjective: mixed dimensions");
    l_mean += p->meta().L;
    gamma_min = std::min(gamma_min, p->meta().gamma);
  }
  l_mean /= static_cast<double>(parts_.size());
  meta_ = make_meta(first.a, l_mean, gamma_min, 0.0);
  noise_delta_ = 0.0;
}

double AverageObjective::value(const Vec& x) const {
  double s = 0.0;
  for (const auto& p : parts_) s += p->value(x);
  return s / static_cast<double>(parts_.size());
}

Vec AverageObjective::grad(const Vec& x) const {
  Vec g(x.size(), 0.0);
  for (const auto& p : parts_) axpy(1.0, p->grad(x), g);
  for (double& v : g) v /= static_cast<double>(parts_.size());
  return g;
}

}  // namespace submax
