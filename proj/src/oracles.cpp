#include "submax/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace submax::oracle {

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double step) {
  Vec g(x.size());
  Vec p = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] = x[i] + step;
    const double fp = f(p);
    p[i] = x[i] - step;
    const double fm = f(p);
    p[i] = x[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

double cubic_eig_maxabs_3x3(const DenseMatrix& m) {
  if (m.rows() != 3 || m.cols() != 3 || !m.is_symmetric())
    throw std::invalid_argument("cubic_eig_maxabs_3x3: need a symmetric 3x3 matrix");
  const double p1 = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
  if (p1 == 0.0)
    return std::max({std::abs(m(0, 0)), std::abs(m(1, 1)), std::abs(m(2, 2))});
  const double q = (m(0, 0) + m(1, 1) + m(2, 2)) / 3.0;
  const double p2 = (m(0, 0) - q) * (m(0, 0) - q) + (m(1, 1) - q) * (m(1, 1) - q) +
                    (m(2, 2) - q) * (m(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  DenseMatrix b(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = (m(i, j) - (i == j ? q : 0.0)) / p;
  const double detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                      b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                      b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  return std::max({std::abs(e1), std::abs(e2), std::abs(e3)});
}

std::optional<Vec> solve_dense(DenseMatrix a, Vec b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw std::invalid_argument("solve_dense: dimension mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (std::abs(a(piv, col)) < 1e-12) return std::nullopt;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a(i, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      b[i] -= f * b[col];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

Vec project_cardinality_bruteforce(const Vec& y, double k) {
  const std::size_t n = y.size();
  std::size_t patterns = 1;
  for (std::size_t i = 0; i < n; ++i) patterns *= 3;

  Vec best;
  double best_d = std::numeric_limits<double>::infinity();
  std::vector<int> state(n);  // 0 = at zero, 1 = free, 2 = at one
  for (std::size_t code = 0; code < patterns; ++code) {
    std::size_t c = code;
    int ones = 0, frees = 0;
    double free_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
      if (state[i] == 2) ++ones;
      if (state[i] == 1) {
        ++frees;
        free_sum += y[i];
      }
    }
    Vec x(n, 0.0);
    if (frees == 0) {
      if (std::abs(ones - k) > 1e-9) continue;
      for (std::size_t i = 0; i < n; ++i) x[i] = state[i] == 2 ? 1.0 : 0.0;
    } else {
      const double mu = (free_sum + ones - k) / frees;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        if (state[i] == 1) {
          x[i] = y[i] - mu;
          ok = x[i] >= -1e-9 && x[i] <= 1.0 + 1e-9;
        } else if (state[i] == 2) {
          x[i] = 1.0;
        }
      }
      if (!ok) continue;
    }
    const double d = dist2(x, y);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  }
  return best;
}

Vec lmo_cardinality_bruteforce(const Vec& v, double k) {
  const std::size_t n = v.size();
  const auto whole = static_cast<std::size_t>(std::floor(k));
  const double frac = k - static_cast<double>(whole);

  Vec best;
  double best_val = -std::numeric_limits<double>::infinity();
  // vertices: `whole` ones plus at most one fractional coordinate
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    const auto ones = static_cast<std::size_t>(std::popcount(mask));
    if (ones != whole) continue;
    if (frac == 0.0) {
      Vec x(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::size_t{1} << i)) x[i] = 1.0;
      const double val = dot(v, x);
      if (val > best_val) {
        best_val = val;
        best = x;
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (std::size_t{1} << j)) continue;
        Vec x(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          if (mask & (std::size_t{1} << i)) x[i] = 1.0;
        x[j] = frac;
        const double val = dot(v, x);
        if (val > best_val) {
          best_val = val;
          best = x;
        }
      }
    }
  }
  return best;
}

namespace {

// All constraints of the polytope as rows <g, x> <= h.
void gather_rows(const Polytope& p, std::vector<Vec>& rows, Vec& rhs) {
  const std::size_t n = p.u.size();
  for (std::size_t i = 0; i < p.A.rows(); ++i) {
    Vec r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = p.A(i, j);
    rows.push_back(std::move(r));
    rhs.push_back(p.b[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    Vec r(n, 0.0);
    r[j] = 1.0;
    rows.push_back(r);
    rhs.push_back(p.u[j]);
    r[j] = -1.0;
    rows.push_back(r);
    rhs.push_back(0.0);
  }
}

bool feasible_point(const Vec& x, const std::vector<Vec>& rows, const Vec& rhs, double tol) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (dot(rows[i], x) > rhs[i] + tol) return false;
  return true;
}

}  // namespace

Vec project_polytope_bruteforce(const Vec& y, const Polytope& p) {
  const std::size_t n = y.size();
  std::vector<Vec> rows;
  Vec rhs;
  gather_rows(p, rows, rhs);
  const std::size_t m = rows.size();

  Vec best;
  double best_d = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec& x) {
    if (!feasible_point(x, rows, rhs, 1e-9)) return;
    const double d = dist2(x, y);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  };

  consider(y);  // empty active set
  std::vector<std::size_t> subset;
  // enumerate active subsets of size 1..n; the projection onto the affine
  // span of the true active set is the projection itself
  std::function<void(std::size_t)> recurse = [&](std::size_t startv) {
    if (!subset.empty() && subset.size() <= n) {
      const std::size_t s = subset.size();
      // KKT system:  [I  G'] [x     ] = [y]
      //              [G  0 ] [lambda] = [h_S]
      DenseMatrix kkt(n + s, n + s);
      Vec rhs_kkt(n + s, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        kkt(i, i) = 1.0;
        rhs_kkt[i] = y[i];
      }
      for (std::size_t r = 0; r < s; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
          kkt(n + r, j) = rows[subset[r]][j];
          kkt(j, n + r) = rows[subset[r]][j];
        }
        rhs_kkt[n + r] = rhs[subset[r]];
      }
      if (auto sol = solve_dense(kkt, rhs_kkt)) consider(Vec(sol->begin(), sol->begin() + n));
    }
    if (subset.size() == n) return;
    for (std::size_t v = startv; v < m; ++v) {
      subset.push_back(v);
      recurse(v + 1);
      subset.pop_back();
    }
  };
  recurse(0);
  return best;
}

double lp_value_bruteforce(const Vec& v, const Polytope& p) {
  const std::size_t n = v.size();
  std::vector<Vec> rows;
  Vec rhs;
  gather_rows(p, rows, rhs);
  const std::size_t m = rows.size();

  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> subset;
  std::function<void(std::size_t)> recurse = [&](std::size_t startv) {
    if (subset.size() == n) {
      DenseMatrix g(n, n);
      Vec h(n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < n; ++j) g(r, j) = rows[subset[r]][j];
        h[r] = rhs[subset[r]];
      }
      if (auto x = solve_dense(g, h))
        if (feasible_point(*x, rows, rhs, 1e-8)) best = std::max(best, dot(v, *x));
      return;
    }
    for (std::size_t i = startv; i < m; ++i) {
      subset.push_back(i);
      recurse(i + 1);
      subset.pop_back();
    }
  };
  recurse(0);
  return best;
}

GridOpt grid_opt_2d(const std::function<double(const Vec&)>& f, const FeasibleSet& set,
                    double step) {
  if (set.dim() != 2) throw std::invalid_argument("grid_opt_2d: set must be 2-d");
  GridOpt best{{}, -std::numeric_limits<double>::infinity()};
  auto consider = [&](const Vec& x) {
    const double v = f(x);
    if (v > best.value) best = {x, v};
  };

  if (set.kind() == FeasibleSet::Kind::Cardinality) {
    const double k = set.cardinality_k();
    const double lo = std::max(0.0, k - 1.0);
    const double hi = std::min(1.0, k);
    for (double x0 = lo; x0 <= hi + 1e-12; x0 += step) {
      const double x1 = std::min(1.0, std::max(0.0, k - x0));
      consider({std::min(x0, hi), x1});
    }
    return best;
  }

  const Vec& u = set.upper_bounds();
  for (double x0 = 0.0; x0 <= u[0] + 1e-12; x0 += step) {
    for (double x1 = 0.0; x1 <= u[1] + 1e-12; x1 += step) {
      const Vec x{std::min(x0, u[0]), std::min(x1, u[1])};
      if (set.contains(x, 1e-9)) consider(x);
    }
  }
  return best;
}

}  // namespace submax::oracle
