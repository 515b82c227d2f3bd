#pragma once

#include <functional>
#include <optional>

#include "submax/feasible.hpp"
#include "submax/matrix.hpp"
#include "submax/objective.hpp"

// Brute-force reference implementations, deliberately independent of the
// production code paths they are used to check. Exponential or grid-based,
// for small instances only.
namespace submax::oracle {

// Central finite differences of f at x.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double step = 1e-6);

// Largest absolute eigenvalue of a symmetric 3x3 matrix from the closed-form
// trigonometric roots of its characteristic polynomial.
double cubic_eig_maxabs_3x3(const DenseMatrix& m);

// Gaussian elimination with partial pivoting; nullopt on singular systems.
std::optional<Vec> solve_dense(DenseMatrix a, Vec b);

// Projection onto {x in [0,1]^n : sum x = k} by enumerating all 3^n
// clip patterns (each coordinate at 0, free, or 1).
Vec project_cardinality_bruteforce(const Vec& y, double k);

// argmax <v, x> over the same slice by enumerating slice vertices.
Vec lmo_cardinality_bruteforce(const Vec& v, double k);

// Projection onto {Ax <= b, 0 <= x <= u} by enumerating active subsets of
// all constraints and keeping the feasible candidate closest to y.
Vec project_polytope_bruteforce(const Vec& y, const Polytope& p);

// Optimal value of max <v, x> over the polytope by enumerating basic points.
double lp_value_bruteforce(const Vec& v, const Polytope& p);

// Dense grid maximization over 2-d sets (step along each axis); for the
// cardinality slice the grid walks the feasible segment.
struct GridOpt {
  Vec x;
  double value;
};
GridOpt grid_opt_2d(const std::function<double(const Vec&)>& f, const FeasibleSet& set,
                    double step = 1e-3);

}  // namespace submax::oracle
