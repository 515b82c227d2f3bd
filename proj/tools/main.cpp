// Command-line front end: `run` executes an experiment config and writes CSV
// (plus optional SVG charts), `verify` runs the named property suite, `plot`
// renders a line chart from any CSV produced by `run`.
//
// Exit codes: 0 success, 1 verification failure, 2 config error, 3 runtime
// error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "submax/bench.hpp"
#include "submax/svg.hpp"
#include "submax/verify.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override, int parallel) {
  submax::ExperimentConfig cfg;
  try {
    cfg = submax::load_config(config_path);
  } catch (const submax::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  if (!out_override.empty()) cfg.output.dir = out_override;

  try {
    const submax::RunResult result = submax::run_experiment(cfg, parallel);
    std::filesystem::create_directories(cfg.output.dir);
    const std::string csv = submax::to_csv(result.rows);
    const std::string csv_path = cfg.output.dir + "/results.csv";
    submax::write_file(csv_path, csv);
    std::printf("wrote %s (%zu rows, %zu failed cells)\n", csv_path.c_str(),
                result.rows.size(), result.failures.size());
    for (const submax::CellFailure& f : result.failures)
      std::fprintf(stderr, "failed cell %s: %s\n", f.run_id.c_str(), f.reason.c_str());
    if (cfg.online.enabled)
      std::printf("hindsight comparator value %.6g (first-order gap bound %.3g)\n",
                  result.hindsight_value, result.hindsight_gap_bound);

    if (cfg.output.emit_svg && !result.rows.empty()) {
      const submax::CsvTable table = submax::parse_csv(csv);
      submax::write_file(cfg.output.dir + "/values.svg",
                         submax::render_line_svg(table, {"t", "f_value", "run_id"}));
      if (cfg.online.enabled)
        submax::write_file(cfg.output.dir + "/regret.svg",
                           submax::render_line_svg(table, {"t", "regret", "run_id"}));
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 3;
  }
}

int cmd_verify(const std::string& suite) {
  try {
    const auto results = submax::run_suite(suite);
    submax::print_results(results);
    return submax::all_passed(results) ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 3;
  }
}

int cmd_plot(const std::string& csv_path, const submax::PlotSpec& spec,
             const std::string& out_path) {
  try {
    std::ifstream in(csv_path);
    if (!in) {
      std::fprintf(stderr, "config error: cannot open '%s'\n", csv_path.c_str());
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const submax::CsvTable table = submax::parse_csv(ss.str());
    submax::write_file(out_path, submax::render_line_svg(table, spec));
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic continuous submodular maximization benchmark harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string config_path, out_dir;
  int parallel = 1;
  run->add_option("--config", config_path, "experiment config (JSON object)")->required();
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--parallel", parallel, "worker threads for independent cells")
      ->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  verify->add_option("--suite", suite, "core | numeric | experiments | all");

  auto* plot = app.add_subcommand("plot", "render a line chart from a results CSV");
  std::string csv_path, x_col, y_col, group_col, svg_out;
  plot->add_option("--csv", csv_path, "input CSV")->required();
  plot->add_option("--x", x_col, "x column")->required();
  plot->add_option("--y", y_col, "y column")->required();
  plot->add_option("--group", group_col, "grouping column")->required();
  plot->add_option("--out", svg_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) return cmd_run(config_path, out_dir, parallel);
  if (verify->parsed()) return cmd_verify(suite);
  return cmd_plot(csv_path, {x_col, y_col, group_col}, svg_out);
}
