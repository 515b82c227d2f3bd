#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "submax/online.hpp"

namespace submax {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemConfig {
  std::string kind;  // "qp" | "special_case"
  int k = 15;        // special_case size parameter
  int n = 25;        // qp dimension
  int m = 12;        // qp constraint count
  double noise_delta = 0.0;
  std::uint64_t seed = 1;
};

struct ConstraintConfig {
  std::string kind;       // "cardinality" | "polytope" | "box"
  double k = -1.0;        // cardinality budget; defaults to the problem's k
  int max_sweeps = 200000;  // polytope projection sweep budget
};

struct SolverConfig {
  std::string name;   // ga | bga | cg | scg | bfw | oga | obga | meta_fw | meta_fw_vr
  std::string label;  // run id prefix and legend name; defaults to name(batch)
  int T = 100;
  int batch = 1;
  double c = 1.0;
  double delta = 1.0;  // bfw rate parameter
  std::optional<double> eta;
  std::string start = "origin";  // "origin" | "local"
  int K = 0;                     // meta oracle count; 0 means online.K
};

struct DelayConfig {
  std::string kind = "none";  // "none" | "uniform" | "explicit"
  int lo = 1;
  int hi = 5;
  std::vector<int> list;
};

struct OnlineBlock {
  bool enabled = false;
  int horizon = 100;
  DelayConfig delay;
  int K = 50;
  int hindsight_iters = 300;
};

struct OutputConfig {
  std::string dir = "out";
  bool emit_svg = false;
};

struct ExperimentConfig {
  ProblemConfig problem;
  ConstraintConfig constraint;
  std::vector<SolverConfig> solvers;
  OnlineBlock online;
  std::vector<std::uint64_t> repeats{1};
  OutputConfig output;
};

// Parses and validates the JSON-object experiment format. Unknown keys are
// rejected; errors carry the offending key or parse position.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct CsvRow {
  std::string run_id;
  std::string solver;
  std::string problem;
  std::uint64_t seed = 0;
  int t = 0;
  double f_value = 0.0;
  double cum_value = 0.0;
  std::optional<double> regret;  // online runs only
  std::int64_t wallclock_ns = 0;
};

struct CellFailure {
  std::string run_id;
  std::string reason;
};

struct RunResult {
  std::vector<CsvRow> rows;        // sorted by (run_id, t)
  std::vector<CellFailure> failures;
  double hindsight_value = 0.0;    // sum objective at the fixed comparator
  double hindsight_gap_bound = 0.0;  // 0 for offline runs
};

// Runs every (solver, seed) cell; a failing cell is recorded and skipped
// without aborting its siblings. threads > 1 fans cells out to a worker
// pool; output is identical to the single-threaded run.
RunResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

inline constexpr const char* kCsvHeader =
    "run_id,solver,problem,seed,t,f_value,cum_value,regret,wallclock_ns";

std::string to_csv(const std::vector<CsvRow>& rows);

// Drops the wallclock column, the one field excluded from determinism
// guarantees, so outputs can be compared byte for byte.
std::string csv_mask_wallclock(const std::string& csv_text);

}  // namespace submax
