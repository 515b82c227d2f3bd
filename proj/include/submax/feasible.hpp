#pragma once

#include <stdexcept>
#include <string>

#include "submax/matrix.hpp"
#include "submax/rng.hpp"
#include "submax/vec.hpp"

namespace submax {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative projection ran out of sweeps; carries the best iterate and its
// constraint residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Vec best, double residual)
      : std::runtime_error(what), best_(std::move(best)), residual_(residual) {}
  const Vec& best_iterate() const { return best_; }
  double residual() const { return residual_; }

 private:
  Vec best_;
  double residual_;
};

struct Polytope {
  DenseMatrix A;  // m x n
  Vec b;
  Vec u;  // box upper bounds
};

// Euclidean projection onto {x in [0, 1]^n : sum(x) = k}: clip(y - mu) with
// mu found by bisection on the monotone coordinate-sum map, to residual
// |sum(x) - k| <= tol. Throws InfeasibleError when k lies outside [0, n].
Vec project_cardinality(const Vec& y, double k, double tol = 1e-10);

// argmax <v, s> over the same slice: ones on the floor(k) largest entries of
// v, the fractional remainder on the next, ties resolved toward lower index.
Vec lmo_cardinality(const Vec& v, double k);

// Dykstra's alternating projection over the m halfspaces and the box,
// iterated until the change across one full sweep drops below tol. Throws
// ConvergenceError with the best iterate when the sweep budget runs out.
Vec project_polytope(const Vec& y, const Polytope& p, double tol = 1e-12,
                     int max_sweeps = 20000);

// argmax <v, s> s.t. As <= b, 0 <= s <= u, by dense two-phase simplex with
// Bland's pivot rule; returns an optimal vertex.
Vec lmo_polytope(const Vec& v, const Polytope& p);

// Convex constraint set with projection (ascent methods) and linear
// maximization (Frank-Wolfe methods). Values are immutable; project and lmo
// are pure and safe to call concurrently.
class FeasibleSet {
 public:
  enum class Kind { Box, Cardinality, Polytope };

  static FeasibleSet box(Vec u);
  static FeasibleSet cardinality(int n, double k);
  static FeasibleSet polytope(Polytope p, int max_sweeps = 200000);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }

  Vec project(const Vec& y) const;
  Vec lmo(const Vec& v) const;
  bool contains(const Vec& x, double slack = 1e-8) const;

  double diameter() const { return diameter_; }
  double radius() const { return radius_; }

  // A feasible point from n uniform draws pushed through project; not a
  // uniform sample of the set, just a seeded point generator.
  Vec sample(RngStream& rng) const;

  double cardinality_k() const { return k_; }
  const Vec& upper_bounds() const { return u_; }
  const Polytope& poly() const;

 private:
  FeasibleSet() = default;

  Kind kind_ = Kind::Box;
  int n_ = 0;
  double k_ = 0.0;  // cardinality budget
  Vec u_;           // box bounds (box and polytope kinds)
  Polytope poly_;
  int max_sweeps_ = 200000;
  double diameter_ = 0.0;
  double radius_ = 0.0;
};

struct SetGeometry {
  double diameter;
  double radius;
};

// Conservative diameter/radius bounds; exact for boxes and integer-budget
// cardinality slices.
SetGeometry set_geometry(const FeasibleSet& s);

}  // namespace submax
