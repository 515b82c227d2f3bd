#pragma once

#include <cstdint>
#include <optional>

#include "submax/boosting.hpp"
#include "submax/feasible.hpp"

namespace submax {

// Whether a solver estimates the auxiliary gradient stochastically or
// evaluates it by quadrature on the exact oracle (deterministic runs).
enum class GradMode { Estimator, Quadrature };

struct OfflineConfig {
  int T = 100;
  int batch = 1;
  double c = 1.0;
  std::optional<double> eta_override;  // fixed step instead of the schedule
  double delta_bfw = 1.0;              // Frank-Wolfe rate parameter, > 0
  std::optional<Vec> start;            // default: project(origin)
  bool bfw_v0_feasible = false;        // start the momentum at project(0) instead of 0
  GradMode grad_mode = GradMode::Estimator;
  int quad_panels = 8;
  int quad_order = 8;
};

// Per-iteration record of one solver run. values[t-1] = f(x_t) with x_1 the
// start point; final_point is the last point the update rule produced (for
// the Frank-Wolfe pair this is one step past iterates.back()).
struct OfflineTrace {
  std::vector<Vec> iterates;
  Vec values;
  Vec final_point;
  double final_value = 0.0;
  int chosen_index = 0;  // l in [1, T]
  Vec chosen_point;
  double chosen_value = 0.0;
  Vec weights;  // iterate-selection weights
  double weight_sum = 0.0;
  std::vector<std::int64_t> wallclock_ns;
  std::uint64_t seed = 0;
};

// Categorical draw over normalized nonnegative weights, 1-based.
int select_index(const Vec& weights, RngStream& rng);

// Step and momentum schedules, exposed for tests.
double bga_eta(int t, const BoostConstants& bc, double diam);
double bfw_eta(int T, double delta);
double bfw_rho(int t, double delta);  // capped at 1

// Boosted projected stochastic gradient ascent; returns the iterate chosen
// by the weighted distribution (unit weights, last weight 1 + ln tau).
OfflineTrace run_bga(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg,
                     RngStream& rng);

// Projected stochastic gradient ascent on f with step 1/sqrt(t); returns the
// final iterate.
OfflineTrace run_ga(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg,
                    RngStream& rng);

// Frank-Wolfe with exact gradients and step 1/T; deterministic.
OfflineTrace run_cg(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg);

// Frank-Wolfe over a momentum average of stochastic gradients,
// rho_t = 1/(t+3)^(2/3).
OfflineTrace run_scg(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg,
                     RngStream& rng);

// Frank-Wolfe over a momentum average of boosted gradients with constant step
// T^(-1/(1+delta)); weighted output like run_bga.
OfflineTrace run_bfw(const Objective& obj, const FeasibleSet& set, const OfflineConfig& cfg,
                     RngStream& rng);

}  // namespace submax
