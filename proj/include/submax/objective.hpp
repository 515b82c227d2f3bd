#pragma once

#include <vector>

#include "submax/rng.hpp"
#include "submax/vec.hpp"

namespace submax {

// Analytic constants of an objective over its domain box X = prod [0, a_i].
struct ObjectiveMeta {
  int n = 0;
  Vec a;                  // box upper bounds, a_i > 0
  double L = 0.0;         // gradient Lipschitz constant
  double gamma = 1.0;     // weak diminishing-returns parameter, in (0, 1]
  double sigma = 0.0;     // l2 bound on per-draw gradient noise
  double radius_x = 0.0;  // ||a||
};

ObjectiveMeta make_meta(Vec a, double L, double gamma, double sigma);

// Objective oracle: exact value and gradient plus a stochastic gradient with
// a known Gaussian noise scale. Instances are immutable after construction;
// noisy_grad draws from the caller's stream, so concurrent runs simply own
// distinct streams.
class Objective {
 public:
  virtual ~Objective() = default;

  const ObjectiveMeta& meta() const { return meta_; }
  double noise_delta() const { return noise_delta_; }

  virtual double value(const Vec& x) const = 0;
  virtual Vec grad(const Vec& x) const = 0;

  // Mean of `batch` draws of grad(x) + delta * g with g standard normal per
  // coordinate; unbiased for any batch size. delta = 0 returns grad exactly
  // while consuming the same number of stream draws.
  Vec noisy_grad(const Vec& x, int batch, RngStream& rng) const;

 protected:
  ObjectiveMeta meta_;
  double noise_delta_ = 0.0;
};

enum class StructureCheck { GradRatio, MeetJoin };

struct StructureViolation {
  int trial;
  StructureCheck check;
  int component;  // -1 for the meet/join inequality
  double slack;   // amount by which the inequality failed
};

struct StructureReport {
  std::vector<StructureViolation> violations;
  double gamma_hat = 0.0;  // statistical lower estimate of the DR parameter
  int trials = 0;
};

// Samples random pairs in the domain box and checks the gradient-ratio and
// meet/join inequalities that a monotone gamma-weakly DR-submodular function
// must satisfy. Violations are data, not errors; gamma_hat is the smallest
// gradient ratio observed on ordered pairs.
StructureReport verify_structure(const Objective& obj, double gamma, int trials, double tol,
                                 RngStream& rng);

}  // namespace submax
