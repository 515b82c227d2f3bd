#pragma once

#include "submax/vec.hpp"

namespace submax {

struct QuadRule {
  Vec nodes;
  Vec weights;
};

// Gauss-Legendre rule mapped to [0, 1]; weights sum to 1 and the rule is
// exact for polynomials of degree <= 2m - 1. m must lie in [1, 64].
QuadRule gauss_legendre01(int m);

// The rule above applied on `panels` equal subintervals of [0, 1].
QuadRule composite_gauss_legendre01(int panels, int order);

}  // namespace submax
