#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "submax/matrix.hpp"
#include "submax/objective.hpp"

namespace submax {

// Closed-form value and gradient of the coverage-style objective on
// [0, 1]^(2k+1). Throws std::domain_error when x leaves the unit box.
std::pair<double, Vec> special_case_eval(int k, const Vec& x);

// Monotone DR-submodular test function with a known suboptimal local maximum
// on the cardinality slice sum(x) = k: the point with k leading ones attains
// k + 1 while the box-constrained global maximum attains 2k + 1.
class SpecialCaseObjective final : public Objective {
 public:
  explicit SpecialCaseObjective(int k, double noise_delta = 0.0);

  int k() const { return k_; }
  Vec local_point() const;   // k leading ones
  Vec global_point() const;  // k+1 trailing ones

  double value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;

 private:
  int k_;
};

// Monotone quadratic x'Hx/2 + h'x with H symmetric nonpositive and h = -Hu,
// over the box [0, u], optionally intersected with Ax <= b by the caller.
struct QpProblem {
  DenseMatrix H;  // n x n symmetric, entries in [-1, 0]
  DenseMatrix A;  // m x n, entries in [0, 1]; may have zero rows
  Vec b;
  Vec u;
  Vec h;  // -H u
  double noise_delta = 0.0;
};

// Seeded random instance: lower triangle of H drawn uniform on [-1, 0] row by
// row and mirrored, then A drawn uniform on [0, 1] row-major; b = u = 1.
QpProblem qp_generate(int n, int m, std::uint64_t seed, double noise_delta = 0.0);

// Constraint-free instance around an explicit H (fixture helper).
QpProblem qp_fixture(DenseMatrix H, double noise_delta = 0.0);

std::pair<double, Vec> qp_eval(const QpProblem& p, const Vec& x);

class QpObjective final : public Objective {
 public:
  explicit QpObjective(QpProblem p);
  const QpProblem& problem() const { return p_; }

  double value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;

 private:
  QpProblem p_;
};

// Pointwise mean of a sequence of objectives over a common box. Exact
// gradients only; used to solve for the fixed comparator of online runs.
class AverageObjective final : public Objective {
 public:
  explicit AverageObjective(std::vector<std::shared_ptr<const Objective>> parts);

  double value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;

 private:
  std::vector<std::shared_ptr<const Objective>> parts_;
};

}  // namespace submax
