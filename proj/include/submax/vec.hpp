#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace submax {

using Vec = std::vector<double>;

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }
inline Vec ones(std::size_t n) { return Vec(n, 1.0); }

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double nrm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist2(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dist2: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double sum(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

// y += alpha * x
inline void axpy(double alpha, const Vec& x, Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vec scaled(const Vec& x, double alpha) {
  Vec r = x;
  for (double& v : r) v *= alpha;
  return r;
}

// (1 - rho) * d + rho * g, the momentum blend used by the averaged-gradient solvers.
inline Vec blend(const Vec& d, const Vec& g, double rho) {
  if (d.size() != g.size()) throw std::invalid_argument("blend: length mismatch");
  Vec r(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) r[i] = (1.0 - rho) * d[i] + rho * g[i];
  return r;
}

inline Vec meet(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("meet: length mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
  return r;
}

inline Vec join(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("join: length mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

// Componentwise clamp of v to [lo, hi].
inline Vec clip_box(const Vec& v, const Vec& lo, const Vec& hi) {
  if (v.size() != lo.size() || v.size() != hi.size())
    throw std::invalid_argument("clip_box: length mismatch");
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (lo[i] > hi[i]) throw std::invalid_argument("clip_box: lo > hi");
    r[i] = std::min(hi[i], std::max(lo[i], v[i]));
  }
  return r;
}

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace submax
