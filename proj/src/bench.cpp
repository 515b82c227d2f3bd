#include "submax/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "submax/problems.hpp"

namespace submax {

namespace {

using nlohmann::json;

const std::set<std::string> kOfflineSolvers = {"ga", "bga", "cg", "scg", "bfw"};
const std::set<std::string> kOnlineSolvers = {"oga", "obga", "meta_fw", "meta_fw_vr"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
  for (const auto& item : j.items())
    if (!allowed.contains(item.key()))
      throw ConfigError("unknown key '" + ctx + "." + item.key() + "'");
}

const json& require_obj(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError("missing key '" + ctx + "." + key + "'");
  if (!j.at(key).is_object())
    throw ConfigError("'" + ctx + "." + key + "' must be an object");
  return j.at(key);
}

template <typename T>
T get_field(const json& j, const std::string& key, T fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + ctx + "." + key + "' has the wrong type");
  }
}

SolverConfig parse_solver(const json& j, int index, const OnlineBlock& online) {
  const std::string ctx = "solvers[" + std::to_string(index) + "]";
  check_keys(j, {"name", "label", "T", "batch", "c", "delta", "eta", "start", "K"}, ctx);
  SolverConfig s;
  s.name = get_field<std::string>(j, "name", "", ctx);
  if (s.name.empty()) throw ConfigError("missing key '" + ctx + ".name'");
  if (!kOfflineSolvers.contains(s.name) && !kOnlineSolvers.contains(s.name))
    throw ConfigError("'" + ctx + ".name': unknown solver '" + s.name + "'");
  s.T = get_field<int>(j, "T", online.enabled ? online.horizon : 100, ctx);
  s.batch = get_field<int>(j, "batch", 1, ctx);
  s.c = get_field<double>(j, "c", 1.0, ctx);
  s.delta = get_field<double>(j, "delta", 1.0, ctx);
  if (j.contains("eta")) s.eta = get_field<double>(j, "eta", 0.0, ctx);
  s.start = get_field<std::string>(j, "start", "origin", ctx);
  s.K = get_field<int>(j, "K", 0, ctx);
  s.label = get_field<std::string>(j, "label", s.name + "(" + std::to_string(s.batch) + ")", ctx);

  if (s.T < 1) throw ConfigError("'" + ctx + ".T' must be >= 1");
  if (s.batch < 1) throw ConfigError("'" + ctx + ".batch' must be >= 1");
  if (!(s.c > 0.0)) throw ConfigError("'" + ctx + ".c' must be positive");
  if (!(s.delta > 0.0)) throw ConfigError("'" + ctx + ".delta' must be positive");
  if (s.start != "origin" && s.start != "local")
    throw ConfigError("'" + ctx + ".start' must be 'origin' or 'local'");
  if (s.label.find(',') != std::string::npos || s.label.find('\n') != std::string::npos)
    throw ConfigError("'" + ctx + ".label' must not contain commas or newlines");
  return s;
}

ExperimentConfig validate(const json& root) {
  check_keys(root, {"problem", "constraint", "solvers", "online", "repeats", "output"}, "");
  ExperimentConfig cfg;

  const json& prob = require_obj(root, "problem", "");
  check_keys(prob, {"kind", "k", "n", "m", "noise_delta", "seed"}, "problem");
  cfg.problem.kind = get_field<std::string>(prob, "kind", "", "problem");
  if (cfg.problem.kind != "qp" && cfg.problem.kind != "special_case")
    throw ConfigError("'problem.kind' must be 'qp' or 'special_case'");
  cfg.problem.k = get_field<int>(prob, "k", 15, "problem");
  cfg.problem.n = get_field<int>(prob, "n", 25, "problem");
  cfg.problem.m = get_field<int>(prob, "m", 12, "problem");
  cfg.problem.noise_delta = get_field<double>(prob, "noise_delta", 0.0, "problem");
  cfg.problem.seed = get_field<std::uint64_t>(prob, "seed", 1, "problem");
  if (cfg.problem.kind == "special_case" && cfg.problem.k < 1)
    throw ConfigError("'problem.k' must be >= 1");
  if (cfg.problem.kind == "qp" && (cfg.problem.n < 1 || cfg.problem.m < 1))
    throw ConfigError("'problem.n' and 'problem.m' must be >= 1");
  if (cfg.problem.noise_delta < 0.0)
    throw ConfigError("'problem.noise_delta' must be nonnegative");

  if (root.contains("online")) {
    const json& online = require_obj(root, "online", "");
    check_keys(online, {"enabled", "horizon", "delay", "K", "hindsight_iters"}, "online");
    cfg.online.enabled = get_field<bool>(online, "enabled", false, "online");
    cfg.online.horizon = get_field<int>(online, "horizon", 100, "online");
    cfg.online.K = get_field<int>(online, "K", 50, "online");
    cfg.online.hindsight_iters = get_field<int>(online, "hindsight_iters", 300, "online");
    if (cfg.online.horizon < 1) throw ConfigError("'online.horizon' must be >= 1");
    if (cfg.online.K < 1) throw ConfigError("'online.K' must be >= 1");
    if (cfg.online.hindsight_iters < 1)
      throw ConfigError("'online.hindsight_iters' must be >= 1");
    if (online.contains("delay")) {
      const json& delay = require_obj(online, "delay", "online");
      check_keys(delay, {"kind", "lo", "hi", "list"}, "online.delay");
      cfg.online.delay.kind = get_field<std::string>(delay, "kind", "none", "online.delay");
      cfg.online.delay.lo = get_field<int>(delay, "lo", 1, "online.delay");
      cfg.online.delay.hi = get_field<int>(delay, "hi", 5, "online.delay");
      cfg.online.delay.list =
          get_field<std::vector<int>>(delay, "list", {}, "online.delay");
      const std::string& kind = cfg.online.delay.kind;
      if (kind != "none" && kind != "uniform" && kind != "explicit")
        throw ConfigError("'online.delay.kind' must be none, uniform or explicit");
      if (kind == "uniform" && (cfg.online.delay.lo < 1 ||
                                cfg.online.delay.hi < cfg.online.delay.lo))
        throw ConfigError("'online.delay': need 1 <= lo <= hi");
      if (kind == "explicit") {
        if (static_cast<int>(cfg.online.delay.list.size()) != cfg.online.horizon)
          throw ConfigError("'online.delay.list' must have horizon entries");
        for (int d : cfg.online.delay.list)
          if (d < 1) throw ConfigError("'online.delay.list' entries must be >= 1");
      }
    }
  }

  if (cfg.online.enabled && cfg.problem.kind != "qp")
    throw ConfigError("online runs require 'problem.kind' = 'qp'");

  if (root.contains("constraint")) {
    const json& cons = require_obj(root, "constraint", "");
    check_keys(cons, {"kind", "k", "max_sweeps"}, "constraint");
    cfg.constraint.kind = get_field<std::string>(cons, "kind", "", "constraint");
    cfg.constraint.k = get_field<double>(cons, "k", -1.0, "constraint");
    cfg.constraint.max_sweeps = get_field<int>(cons, "max_sweeps", 200000, "constraint");
    if (cfg.constraint.max_sweeps < 1)
      throw ConfigError("'constraint.max_sweeps' must be >= 1");
  }
  if (cfg.constraint.kind.empty())
    cfg.constraint.kind = cfg.problem.kind == "qp" ? "polytope" : "cardinality";
  if (cfg.constraint.kind != "cardinality" && cfg.constraint.kind != "polytope" &&
      cfg.constraint.kind != "box")
    throw ConfigError("'constraint.kind' must be cardinality, polytope or box");
  if (cfg.constraint.kind == "polytope" && cfg.problem.kind != "qp")
    throw ConfigError("'constraint.kind' polytope needs a qp problem");
  if (cfg.constraint.kind == "cardinality") {
    if (cfg.constraint.k < 0.0) {
      if (cfg.problem.kind != "special_case")
        throw ConfigError("'constraint.k' is required for a qp cardinality constraint");
      cfg.constraint.k = cfg.problem.k;
    }
  }

  if (!root.contains("solvers")) throw ConfigError("missing key 'solvers'");
  if (!root.at("solvers").is_array() || root.at("solvers").empty())
    throw ConfigError("'solvers' must be a non-empty array");
  std::set<std::string> labels;
  int index = 0;
  for (const json& js : root.at("solvers")) {
    if (!js.is_object()) throw ConfigError("'solvers' entries must be objects");
    SolverConfig s = parse_solver(js, index++, cfg.online);
    if (cfg.online.enabled != kOnlineSolvers.contains(s.name))
      throw ConfigError("solver '" + s.name + "' does not match the online setting");
    if (s.start == "local" && cfg.problem.kind != "special_case")
      throw ConfigError("start 'local' is only defined for the special_case problem");
    if (!labels.insert(s.label).second)
      throw ConfigError("duplicate solver label '" + s.label + "'");
    cfg.solvers.push_back(std::move(s));
  }

  if (root.contains("repeats")) {
    try {
      cfg.repeats = root.at("repeats").get<std::vector<std::uint64_t>>();
    } catch (const json::exception&) {
      throw ConfigError("'repeats' must be an array of seeds");
    }
    if (cfg.repeats.empty()) throw ConfigError("'repeats' must not be empty");
    std::set<std::uint64_t> distinct(cfg.repeats.begin(), cfg.repeats.end());
    if (distinct.size() != cfg.repeats.size())
      throw ConfigError("'repeats' seeds must be distinct");
  }

  if (root.contains("output")) {
    const json& out = require_obj(root, "output", "");
    check_keys(out, {"dir", "emit_svg"}, "output");
    cfg.output.dir = get_field<std::string>(out, "dir", "out", "output");
    cfg.output.emit_svg = get_field<bool>(out, "emit_svg", false, "output");
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  return validate(root);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string problem_label(const ProblemConfig& p) {
  if (p.kind == "qp")
    return "qp_n" + std::to_string(p.n) + "_m" + std::to_string(p.m);
  return "fk_k" + std::to_string(p.k);
}

struct OfflineInstance {
  std::shared_ptr<const Objective> obj;
  FeasibleSet set;
  Vec local_start;  // special_case only
};

FeasibleSet build_set(const ExperimentConfig& cfg, const QpProblem* qp, int n) {
  if (cfg.constraint.kind == "box") return FeasibleSet::box(ones(n));
  if (cfg.constraint.kind == "cardinality")
    return FeasibleSet::cardinality(n, cfg.constraint.k);
  return FeasibleSet::polytope(Polytope{qp->A, qp->b, qp->u}, cfg.constraint.max_sweeps);
}

OfflineInstance build_offline(const ExperimentConfig& cfg) {
  if (cfg.problem.kind == "special_case") {
    auto obj = std::make_shared<SpecialCaseObjective>(cfg.problem.k, cfg.problem.noise_delta);
    FeasibleSet set = build_set(cfg, nullptr, obj->meta().n);
    Vec local = obj->local_point();
    return {std::move(obj), std::move(set), std::move(local)};
  }
  QpProblem p =
      qp_generate(cfg.problem.n, cfg.problem.m, cfg.problem.seed, cfg.problem.noise_delta);
  FeasibleSet set = build_set(cfg, &p, cfg.problem.n);
  return {std::make_shared<QpObjective>(std::move(p)), std::move(set), {}};
}

// Round objectives share the constraint data; each round draws a fresh
// quadratic from the stream mix(problem.seed, t).
ObjectiveSeq build_online_sequence(const ExperimentConfig& cfg, const QpProblem& base) {
  ObjectiveSeq objs;
  objs.reserve(cfg.online.horizon);
  for (int t = 1; t <= cfg.online.horizon; ++t) {
    RngStream rng(mix_seed(cfg.problem.seed, t));
    QpProblem p;
    p.H = DenseMatrix::symmetric_from_lower(
        base.u.size(), [&](std::size_t, std::size_t) { return -rng.uniform01(); });
    p.A = base.A;
    p.b = base.b;
    p.u = base.u;
    p.h = scaled(p.H.matvec(p.u), -1.0);
    p.noise_delta = cfg.problem.noise_delta;
    objs.push_back(std::make_shared<QpObjective>(std::move(p)));
  }
  return objs;
}

DelaySchedule build_delay(const ExperimentConfig& cfg, std::uint64_t seed) {
  const DelayConfig& d = cfg.online.delay;
  if (d.kind == "uniform") {
    RngStream rng(mix_seed(seed, fnv1a64("delay")));
    return schedule_uniform(cfg.online.horizon, d.lo, d.hi, rng);
  }
  if (d.kind == "explicit") return schedule_explicit(d.list);
  return schedule_none(cfg.online.horizon);
}

std::vector<CsvRow> offline_rows(const std::string& run_id, const SolverConfig& solver,
                                 const std::string& problem, std::uint64_t seed,
                                 const OfflineTrace& tr) {
  std::vector<CsvRow> rows;
  double cum = 0.0;
  for (std::size_t t = 0; t < tr.values.size(); ++t) {
    cum += tr.values[t];
    rows.push_back({run_id, solver.label, problem, seed, static_cast<int>(t) + 1,
                    tr.values[t], cum, std::nullopt, tr.wallclock_ns[t]});
  }
  return rows;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, int threads) {
  if (threads < 1) throw std::invalid_argument("run_experiment: threads must be >= 1");

  const std::string prob_label = problem_label(cfg.problem);
  RunResult result;

  struct Cell {
    const SolverConfig* solver;
    std::uint64_t seed;
    std::vector<CsvRow> rows;
    std::optional<CellFailure> failure;
  };
  std::vector<Cell> cells;
  for (const SolverConfig& s : cfg.solvers)
    for (std::uint64_t seed : cfg.repeats) cells.push_back({&s, seed, {}, {}});

  auto run_id_of = [&](const Cell& cell) {
    return cell.solver->label + "_s" + std::to_string(cell.seed);
  };

  if (!cfg.online.enabled) {
    const OfflineInstance inst = build_offline(cfg);
    auto run_cell = [&](Cell& cell) {
      const SolverConfig& s = *cell.solver;
      const std::string run_id = run_id_of(cell);
      try {
        OfflineConfig ocfg;
        ocfg.T = s.T;
        ocfg.batch = s.batch;
        ocfg.c = s.c;
        ocfg.delta_bfw = s.delta;
        ocfg.eta_override = s.eta;
        if (s.start == "local") ocfg.start = inst.local_start;
        const std::uint64_t stream_seed = mix_seed(cell.seed, fnv1a64(s.label));
        RngStream rng(stream_seed);
        OfflineTrace tr;
        if (s.name == "ga")
          tr = run_ga(*inst.obj, inst.set, ocfg, rng);
        else if (s.name == "bga")
          tr = run_bga(*inst.obj, inst.set, ocfg, rng);
        else if (s.name == "cg")
          tr = run_cg(*inst.obj, inst.set, ocfg);
        else if (s.name == "scg")
          tr = run_scg(*inst.obj, inst.set, ocfg, rng);
        else
          tr = run_bfw(*inst.obj, inst.set, ocfg, rng);
        tr.seed = stream_seed;
        cell.rows = offline_rows(run_id, s, prob_label, cell.seed, tr);
      } catch (const std::exception& e) {
        cell.failure = CellFailure{run_id, e.what()};
      }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        run_cell(cells[i]);
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  } else {
    const QpProblem base = qp_generate(cfg.problem.n, cfg.problem.m, cfg.problem.seed,
                                       cfg.problem.noise_delta);
    const ObjectiveSeq objs = build_online_sequence(cfg, base);
    const FeasibleSet set = build_set(cfg, &base, cfg.problem.n);
    const double gamma = objs[0]->meta().gamma;
    const double alpha = -std::expm1(-gamma);

    const HindsightResult hindsight =
        approx_hindsight_opt(objs, set, cfg.online.hindsight_iters);
    result.hindsight_value = hindsight.value;
    {
      // first-order stationarity gap of the comparator, reported as the
      // approximation diagnostic of the regret curves
      AverageObjective avg({objs.begin(), objs.end()});
      const Vec g = avg.grad(hindsight.x_star);
      const Vec s = set.lmo(g);
      Vec diff(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) diff[i] = s[i] - hindsight.x_star[i];
      result.hindsight_gap_bound = std::max(0.0, dot(g, diff)) * cfg.online.horizon;
    }

    auto run_cell = [&](Cell& cell) {
      const SolverConfig& s = *cell.solver;
      const std::string run_id = run_id_of(cell);
      try {
        OnlineConfig ncfg;
        ncfg.T = cfg.online.horizon;
        ncfg.batch = s.batch;
        ncfg.c = s.c;
        ncfg.K = s.K > 0 ? s.K : cfg.online.K;
        ncfg.eta_override = s.eta;  // honored by the boosted ascent solver
        const DelaySchedule sched = build_delay(cfg, cell.seed);
        const std::uint64_t stream_seed = mix_seed(cell.seed, fnv1a64(s.label));
        RngStream rng(stream_seed);
        OnlineTrace tr;
        if (s.name == "oga")
          tr = run_oga(objs, set, sched, ncfg, rng);
        else if (s.name == "obga")
          tr = run_obga(objs, set, sched, ncfg, rng);
        else
          tr = run_meta_fw(objs, set, sched, ncfg, rng, s.name == "meta_fw_vr");
        tr.seed = stream_seed;
        const Vec regret = eval_alpha_regret(tr, objs, alpha, hindsight.x_star);
        for (int t = 1; t <= cfg.online.horizon; ++t)
          cell.rows.push_back({run_id, s.label, prob_label, cell.seed, t,
                               tr.rewards[t - 1], tr.cum_rewards[t - 1], regret[t - 1],
                               tr.wallclock_ns[t - 1]});
      } catch (const std::exception& e) {
        cell.failure = CellFailure{run_id, e.what()};
      }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        run_cell(cells[i]);
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  }

  for (Cell& cell : cells) {
    if (!cell.failure) {
      for (const CsvRow& row : cell.rows) {
        if (!std::isfinite(row.f_value) || !std::isfinite(row.cum_value)) {
          cell.failure = CellFailure{run_id_of(cell), "non-finite value at t=" +
                                                          std::to_string(row.t)};
          break;
        }
      }
    }
    if (cell.failure) {
      result.failures.push_back(std::move(*cell.failure));
      continue;
    }
    for (CsvRow& row : cell.rows) result.rows.push_back(std::move(row));
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const CsvRow& a, const CsvRow& b) {
    return a.run_id != b.run_id ? a.run_id < b.run_id : a.t < b.t;
  });
  return result;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const CsvRow& r : rows) {
    out += r.run_id;
    out += ',';
    out += r.solver;
    out += ',';
    out += r.problem;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.t);
    out += ',';
    out += fmt_double(r.f_value);
    out += ',';
    out += fmt_double(r.cum_value);
    out += ',';
    if (r.regret) out += fmt_double(*r.regret);
    out += ',';
    out += std::to_string(r.wallclock_ns);
    out += '\n';
  }
  return out;
}

std::string csv_mask_wallclock(const std::string& csv_text) {
  std::string out;
  out.reserve(csv_text.size());
  std::istringstream in(csv_text);
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out += pos == std::string::npos ? line : line.substr(0, pos);
    out += '\n';
  }
  return out;
}

}  // namespace submax
