#include "submax/feasible.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace submax {

Vec project_cardinality(const Vec& y, double k, double tol) {
  const auto n = static_cast<double>(y.size());
  if (k < 0.0 || k > n) throw InfeasibleError("project_cardinality: k outside [0, n]");
  if (!(tol > 0.0)) throw std::invalid_argument("project_cardinality: tol must be positive");

  auto clipped_sum = [&](double mu) {
    double s = 0.0;
    for (double yi : y) s += std::min(1.0, std::max(0.0, yi - mu));
    return s;
  };

  double lo = *std::min_element(y.begin(), y.end()) - 1.0;  // sum = n >= k
  double hi = *std::max_element(y.begin(), y.end());        // sum = 0 <= k
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (clipped_sum(mid) > k ? lo : hi) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  Vec x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::min(1.0, std::max(0.0, y[i] - mu));
  if (std::abs(sum(x) - k) > tol)
    throw ConvergenceError("project_cardinality: bisection residual above tol", x,
                           std::abs(sum(x) - k));
  return x;
}

Vec lmo_cardinality(const Vec& v, double k) {
  const auto n = static_cast<double>(v.size());
  if (k < 0.0 || k > n) throw InfeasibleError("lmo_cardinality: k outside [0, n]");
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  Vec s(v.size(), 0.0);
  const auto whole = static_cast<std::size_t>(std::floor(k));
  const double frac = k - static_cast<double>(whole);
  for (std::size_t r = 0; r < whole && r < v.size(); ++r) s[idx[r]] = 1.0;
  if (frac > 0.0 && whole < v.size()) s[idx[whole]] = frac;
  return s;
}

namespace {

// projection onto {x : <a, x> <= b}
void project_halfspace(Vec& x, const Vec& a, double b, double a_nrm_sq) {
  if (a_nrm_sq <= 0.0) return;
  const double viol = dot(a, x) - b;
  if (viol > 0.0) axpy(-viol / a_nrm_sq, a, x);
}

double polytope_residual(const Vec& x, const Polytope& p) {
  double r = 0.0;
  for (std::size_t i = 0; i < p.A.rows(); ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < p.A.cols(); ++j) ax += p.A(i, j) * x[j];
    r = std::max(r, ax - p.b[i]);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    r = std::max(r, -x[j]);
    r = std::max(r, x[j] - p.u[j]);
  }
  return r;
}

// Gaussian elimination on a small symmetric system; false when singular.
bool solve_small(std::vector<Vec>& a, Vec& b) {
  const std::size_t s = b.size();
  for (std::size_t col = 0; col < s; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < s; ++i)
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    if (std::abs(a[piv][col]) < 1e-12) return false;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t i = col + 1; i < s; ++i) {
      const double f = a[i][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < s; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  for (std::size_t i = s; i-- > 0;) {
    for (std::size_t j = i + 1; j < s; ++j) b[i] -= a[i][j] * b[j];
    b[i] /= a[i][i];
  }
  return true;
}

// Exact finishing step: starting from the active set suggested by the
// current Dykstra iterate, solve the equality-constrained projection and
// refine the set (release wrong-sign multipliers, pin out-of-box
// coordinates, add violated halfspaces) until the full KKT conditions hold.
// The candidate is accepted only after complete verification, so a failed
// refinement just hands control back to Dykstra.
bool polish_projection(const Vec& y, const Polytope& p, const std::vector<Vec>& rows,
                       const Vec& x_approx, Vec& out) {
  const std::size_t n = y.size();
  const std::size_t m = rows.size();
  constexpr double kGuess = 1e-6;
  constexpr double kKkt = 1e-9;

  std::vector<bool> active(m, false);
  for (std::size_t i = 0; i < m; ++i)
    active[i] = dot(rows[i], x_approx) >= p.b[i] - kGuess;
  std::vector<int> bound(n, 0);  // -1 at zero, +1 at the upper bound
  for (std::size_t j = 0; j < n; ++j) {
    if (x_approx[j] <= kGuess)
      bound[j] = -1;
    else if (x_approx[j] >= p.u[j] - kGuess)
      bound[j] = 1;
  }

  for (int pass = 0; pass < 30; ++pass) {
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < m; ++i)
      if (active[i]) act.push_back(i);
    const std::size_t s = act.size();
    std::size_t free_count = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (bound[j] == 0) ++free_count;
    if (s > free_count) return false;  // guess is premature, let the sweeps continue

    // multipliers over the active halfspaces, restricted to free
    // coordinates: (A_F A_F') lambda = A_F y_F - (b - A_B x_B)
    Vec lambda(s, 0.0);
    if (s > 0) {
      std::vector<Vec> gram(s, Vec(s, 0.0));
      Vec rhs(s, 0.0);
      for (std::size_t r = 0; r < s; ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double aj = rows[act[r]][j];
          acc += bound[j] == 0 ? aj * y[j] : aj * (bound[j] > 0 ? p.u[j] : 0.0);
        }
        rhs[r] = acc - p.b[act[r]];
        for (std::size_t c = 0; c < s; ++c) {
          double g = 0.0;
          for (std::size_t j = 0; j < n; ++j)
            if (bound[j] == 0) g += rows[act[r]][j] * rows[act[c]][j];
          gram[r][c] = g;
        }
      }
      lambda = rhs;
      if (!solve_small(gram, lambda)) return false;
    }

    Vec pull(n, 0.0);  // (A_S' lambda)_j
    for (std::size_t r = 0; r < s; ++r) axpy(lambda[r], rows[act[r]], pull);
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j)
      x[j] = bound[j] == 0 ? y[j] - pull[j] : (bound[j] > 0 ? p.u[j] : 0.0);

    bool changed = false;

    // pin free coordinates that left the box, release bounds whose
    // multiplier has the wrong sign
    for (std::size_t j = 0; j < n; ++j) {
      if (bound[j] == 0) {
        if (x[j] < -kKkt) {
          bound[j] = -1;
          changed = true;
        } else if (x[j] > p.u[j] + kKkt) {
          bound[j] = 1;
          changed = true;
        }
      } else if (bound[j] > 0 && y[j] - pull[j] - p.u[j] < -kKkt) {
        bound[j] = 0;
        changed = true;
      } else if (bound[j] < 0 && y[j] - pull[j] > kKkt) {
        bound[j] = 0;
        changed = true;
      }
    }
    if (changed) continue;

    // drop the most negative multiplier, one constraint at a time
    std::size_t drop = s;
    double most_negative = -kKkt;
    for (std::size_t r = 0; r < s; ++r)
      if (lambda[r] < most_negative) {
        most_negative = lambda[r];
        drop = r;
      }
    if (drop < s) {
      active[act[drop]] = false;
      continue;
    }

    // add the most violated halfspace
    std::size_t add = m;
    double worst = kKkt;
    for (std::size_t i = 0; i < m; ++i) {
      if (active[i]) continue;
      const double viol = dot(rows[i], x) - p.b[i];
      if (viol > worst) {
        worst = viol;
        add = i;
      }
    }
    if (add < m) {
      active[add] = true;
      continue;
    }

    // full KKT holds: x is the projection
    out = clip_box(x, zeros(n), p.u);
    return true;
  }
  return false;
}

}  // namespace

Vec project_polytope(const Vec& y, const Polytope& p, double tol, int max_sweeps) {
  const std::size_t n = y.size();
  const std::size_t m = p.A.rows();
  if (p.A.cols() != n || p.b.size() != m || p.u.size() != n)
    throw std::invalid_argument("project_polytope: inconsistent dimensions");
  if (max_sweeps < 1) throw std::invalid_argument("project_polytope: max_sweeps must be >= 1");

  std::vector<Vec> rows(m, Vec(n));
  Vec row_nrm_sq(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = p.A(i, j);
    row_nrm_sq[i] = dot(rows[i], rows[i]);
  }

  // Dykstra corrections: one per halfspace plus one for the box. The
  // iterate alone can repeat across sweeps long before convergence, so the
  // stopping test watches the corrections as well (the full Dykstra state).
  std::vector<Vec> corr(m + 1, Vec(n, 0.0));
  Vec x = y;
  Vec prev = x;
  std::vector<Vec> corr_prev = corr;
  const Vec lo = zeros(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t i = 0; i < m; ++i) {
      Vec z = x;
      axpy(1.0, corr[i], z);
      Vec projected = z;
      project_halfspace(projected, rows[i], p.b[i], row_nrm_sq[i]);
      for (std::size_t j = 0; j < n; ++j) corr[i][j] = z[j] - projected[j];
      x = std::move(projected);
    }
    {
      Vec z = x;
      axpy(1.0, corr[m], z);
      Vec projected = clip_box(z, lo, p.u);
      for (std::size_t j = 0; j < n; ++j) corr[m][j] = z[j] - projected[j];
      x = std::move(projected);
    }
    double change = dist2(x, prev);
    for (std::size_t i = 0; i <= m; ++i) change += dist2(corr[i], corr_prev[i]);
    if (change <= tol) return x;
    if (change <= 1e-5 || (sweep >= 1 && (sweep & (sweep + 1)) == 0)) {
      // the active set settles long before the corrections do; attempt the
      // exact finish at sweeps 2^k - 1 and once the state barely moves
      Vec polished;
      if (polish_projection(y, p, rows, x, polished)) return polished;
    }
    prev = x;
    corr_prev = corr;
  }
  throw ConvergenceError("project_polytope: sweep budget exhausted", x, polytope_residual(x, p));
}

namespace {

constexpr double kSimplexEps = 1e-9;

// Dense tableau simplex, maximize <c, x> s.t. Gx <= h, x >= 0, with Bland's
// rule throughout. h may have negative entries (phase 1 inserts artificials).
Vec simplex_maximize(const std::vector<Vec>& g_rows, const Vec& h, const Vec& c) {
  const std::size_t m = g_rows.size();
  const std::size_t n = c.size();

  // columns: structural (n) | slack (m) | artificial (na) | rhs
  std::vector<std::size_t> art_rows;
  for (std::size_t i = 0; i < m; ++i)
    if (h[i] < 0.0) art_rows.push_back(i);
  const std::size_t na = art_rows.size();
  const std::size_t cols = n + m + na;

  std::vector<Vec> tab(m, Vec(cols + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double flip = h[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = flip * g_rows[i][j];
    tab[i][n + i] = flip;
    tab[i][cols] = flip * h[i];
    basis[i] = n + i;
  }
  for (std::size_t a = 0; a < na; ++a) {
    tab[art_rows[a]][n + m + a] = 1.0;
    basis[art_rows[a]] = n + m + a;
  }

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    const double pivot_val = tab[pr][pc];
    for (double& v : tab[pr]) v /= pivot_val;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == pr) continue;
      const double f = tab[i][pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) tab[i][j] -= f * tab[pr][j];
    }
    basis[pr] = pc;
  };

  // minimize <obj, vars>; Bland: entering = lowest eligible column,
  // leaving = lowest basic variable among the ratio-test ties
  auto solve_phase = [&](const Vec& obj, std::size_t active_cols) {
    Vec red(active_cols, 0.0);
    for (int pivots = 0; pivots < 100000; ++pivots) {
      for (std::size_t j = 0; j < active_cols; ++j) {
        double r = obj[j];
        for (std::size_t i = 0; i < m; ++i)
          if (obj[basis[i]] != 0.0) r -= obj[basis[i]] * tab[i][j];
        red[j] = r;
      }
      std::size_t enter = active_cols;
      for (std::size_t j = 0; j < active_cols; ++j) {
        bool basic = false;
        for (std::size_t i = 0; i < m; ++i)
          if (basis[i] == j) basic = true;
        if (!basic && red[j] < -kSimplexEps) {
          enter = j;
          break;
        }
      }
      if (enter == active_cols) return;  // optimal
      std::size_t leave = m;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (tab[i][enter] > kSimplexEps) {
          const double ratio = tab[i][cols] / tab[i][enter];
          if (ratio < best_ratio - kSimplexEps ||
              (ratio < best_ratio + kSimplexEps && (leave == m || basis[i] < basis[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == m) throw std::runtime_error("simplex: unbounded program");
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex: pivot budget exhausted");
  };

  if (na > 0) {
    Vec phase1(cols, 0.0);
    for (std::size_t a = 0; a < na; ++a) phase1[n + m + a] = 1.0;
    solve_phase(phase1, cols);
    double art_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] >= n + m) art_sum += tab[i][cols];
    if (art_sum > 1e-7) throw InfeasibleError("simplex: phase 1 left positive artificials");
    // force remaining artificials out of the basis when possible
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n + m) continue;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (std::abs(tab[i][j]) > kSimplexEps) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Vec phase2(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = -c[j];  // maximize c'x
  solve_phase(phase2, n + m);

  Vec x(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = tab[i][cols];
  return x;
}

}  // namespace

Vec lmo_polytope(const Vec& v, const Polytope& p) {
  const std::size_t n = v.size();
  const std::size_t m = p.A.rows();
  if (p.A.cols() != n || p.b.size() != m || p.u.size() != n)
    throw std::invalid_argument("lmo_polytope: inconsistent dimensions");

  std::vector<Vec> g_rows;
  Vec h;
  g_rows.reserve(m + n);
  h.reserve(m + n);
  for (std::size_t i = 0; i < m; ++i) {
    Vec row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = p.A(i, j);
    g_rows.push_back(std::move(row));
    h.push_back(p.b[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    Vec row(n, 0.0);
    row[j] = 1.0;
    g_rows.push_back(std::move(row));
    h.push_back(p.u[j]);
  }
  return simplex_maximize(g_rows, h, v);
}

FeasibleSet FeasibleSet::box(Vec u) {
  FeasibleSet s;
  s.kind_ = Kind::Box;
  s.n_ = static_cast<int>(u.size());
  for (double ui : u)
    if (!(ui > 0.0)) throw std::invalid_argument("FeasibleSet::box: bounds must be positive");
  s.diameter_ = nrm2(u);
  s.radius_ = s.diameter_;
  s.u_ = std::move(u);
  return s;
}

FeasibleSet FeasibleSet::cardinality(int n, double k) {
  if (n < 1) throw std::invalid_argument("FeasibleSet::cardinality: n must be >= 1");
  if (k < 0.0 || k > n) throw InfeasibleError("FeasibleSet::cardinality: k outside [0, n]");
  FeasibleSet s;
  s.kind_ = Kind::Cardinality;
  s.n_ = n;
  s.k_ = k;
  s.u_ = ones(n);
  const bool integral = std::floor(k) == k;
  s.diameter_ = integral ? std::sqrt(2.0 * std::min(k, n - k))
                         : std::sqrt(static_cast<double>(n));
  s.radius_ = std::sqrt(k);
  return s;
}

FeasibleSet FeasibleSet::polytope(Polytope p, int max_sweeps) {
  const std::size_t n = p.u.size();
  if (p.A.cols() != n || p.b.size() != p.A.rows())
    throw std::invalid_argument("FeasibleSet::polytope: inconsistent dimensions");
  for (std::size_t i = 0; i < p.A.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p.A(i, j) < 0.0)
        throw std::invalid_argument("FeasibleSet::polytope: A must be nonnegative");
  for (double bi : p.b)
    if (bi < 0.0) throw std::invalid_argument("FeasibleSet::polytope: b must be nonnegative");
  for (double ui : p.u)
    if (!(ui > 0.0)) throw std::invalid_argument("FeasibleSet::polytope: u must be positive");
  FeasibleSet s;
  s.kind_ = Kind::Polytope;
  s.n_ = static_cast<int>(n);
  s.u_ = p.u;
  s.diameter_ = nrm2(p.u);  // contained in the box
  s.radius_ = s.diameter_;
  s.poly_ = std::move(p);
  s.max_sweeps_ = max_sweeps;
  return s;
}

Vec FeasibleSet::project(const Vec& y) const {
  if (static_cast<int>(y.size()) != n_)
    throw std::invalid_argument("FeasibleSet::project: dimension mismatch");
  switch (kind_) {
    case Kind::Box:
      return clip_box(y, zeros(n_), u_);
    case Kind::Cardinality:
      return project_cardinality(y, k_);
    case Kind::Polytope:
      return project_polytope(y, poly_, 1e-12, max_sweeps_);
  }
  throw std::logic_error("FeasibleSet::project: bad kind");
}

Vec FeasibleSet::lmo(const Vec& v) const {
  if (static_cast<int>(v.size()) != n_)
    throw std::invalid_argument("FeasibleSet::lmo: dimension mismatch");
  switch (kind_) {
    case Kind::Box: {
      Vec s(n_, 0.0);
      for (int i = 0; i < n_; ++i) s[i] = v[i] > 0.0 ? u_[i] : 0.0;
      return s;
    }
    case Kind::Cardinality:
      return lmo_cardinality(v, k_);
    case Kind::Polytope:
      return lmo_polytope(v, poly_);
  }
  throw std::logic_error("FeasibleSet::lmo: bad kind");
}

bool FeasibleSet::contains(const Vec& x, double slack) const {
  if (static_cast<int>(x.size()) != n_) return false;
  for (int i = 0; i < n_; ++i)
    if (x[i] < -slack || x[i] > u_[i] + slack) return false;
  switch (kind_) {
    case Kind::Box:
      return true;
    case Kind::Cardinality:
      return std::abs(sum(x) - k_) <= slack * std::max(1.0, k_);
    case Kind::Polytope:
      for (std::size_t i = 0; i < poly_.A.rows(); ++i) {
        double ax = 0.0;
        for (int j = 0; j < n_; ++j) ax += poly_.A(i, j) * x[j];
        if (ax > poly_.b[i] + slack) return false;
      }
      return true;
  }
  return false;
}

Vec FeasibleSet::sample(RngStream& rng) const {
  Vec y(n_);
  for (int i = 0; i < n_; ++i) y[i] = u_[i] * rng.uniform01();
  if (kind_ == Kind::Box) return y;
  return project(y);
}

const Polytope& FeasibleSet::poly() const {
  if (kind_ != Kind::Polytope)
    throw std::logic_error("FeasibleSet::poly: not a polytope set");
  return poly_;
}

SetGeometry set_geometry(const FeasibleSet& s) { return {s.diameter(), s.radius()}; }

}  // namespace submax
