// onebit: simulate, estimate, experiment, density and suite front end.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "onebit/config.hpp"
#include "onebit/csv_io.hpp"
#include "onebit/errors.hpp"
#include "onebit/experiment.hpp"
#include "onebit/first_passage.hpp"
#include "onebit/fusion.hpp"
#include "onebit/parallel.hpp"
#include "onebit/suites.hpp"
#include "onebit/trigger.hpp"

namespace fs = std::filesystem;
using namespace onebit;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 0;
};

struct Loaded {
  RunConfig rc;
  std::string text;
  fs::path out;
};

Loaded load(const Common& c) {
  Loaded l;
  l.rc = load_config(c.config);
  if (c.seed) {
    l.rc.master_seed = *c.seed;
    if (l.rc.experiment) l.rc.experiment->master_seed = *c.seed;
  }
  l.text = serialize_config(l.rc);
  l.out = c.out.empty() ? fs::path(l.rc.output) : fs::path(c.out);
  return l;
}

const ExperimentConfig& need_experiment(const RunConfig& rc, const char* cmd) {
  if (!rc.experiment) throw ValidationError({fmt::format("{}: config needs an experiment section", cmd)});
  return *rc.experiment;
}

double horizon_of(const ExperimentConfig& e) {
  const double pmax = *std::max_element(e.points.begin(), e.points.end());
  return e.regime == Regime::Sequential && e.horizon > 0.0 ? e.horizon : pmax;
}

std::vector<TriggerConfig> triggers(const RunConfig& rc, const Model& model) {
  if (!rc.trigger.empty()) return rc.trigger;
  const auto& e = *rc.experiment;
  const double h = e.regime == Regime::DiscreteSampling ? e.h_list.front() : 0.0;
  return triggers_for(e, model, e.points.front(), h);
}

struct OneRun {
  Model model;
  SensorPaths paths;
  PathStats stats;
  std::vector<TriggerConfig> trig;
  MessageLog log;
};

OneRun simulate_one(const RunConfig& rc, std::uint64_t seed) {
  const auto& e = need_experiment(rc, "simulate");
  OneRun r{build_model(rc.model), {}, {}, {}, {}};
  const auto grid = TimeGrid::with_resolution(horizon_of(e), e.steps_per_unit);
  r.paths = simulate_paths(r.model, e.lambda_true, grid, seed, 0);
  r.stats = path_statistics(r.paths, r.model);
  r.trig = triggers(rc, r.model);
  r.log = run_triggers(r.stats, r.trig);
  return r;
}

int cmd_simulate(const Common& c) {
  const auto l = load(c);
  const auto run = simulate_one(l.rc, l.rc.master_seed);
  const auto stem = output_stem("simulate", l.text, l.rc.master_seed);
  write_paths_csv(l.out / (stem + "_paths.csv"), run.paths, run.stats);
  write_messages_csv(l.out / (stem + "_messages.csv"), run.log);
  fmt::print("{} grid points, {} B-messages, {} A-messages -> {}\n", run.paths.grid.size(), run.log.b_count(),
             run.log.a_count(), (l.out / stem).string());
  return 0;
}

int cmd_estimate(const Common& c) {
  const auto l = load(c);
  const auto& e = need_experiment(l.rc, "estimate");
  const auto run = simulate_one(l.rc, l.rc.master_seed);
  const auto state = reconstruct(run.log, run.model, run.trig);
  std::vector<EstimateRecord> out;
  for (double p : e.points) {
    const bool seq = e.regime == Regime::Sequential;
    std::vector<EstimateResult> central;
    bool have_central = false;
    for (auto kind : e.estimators) {
      try {
        EstimateResult r;
        switch (kind) {
          case EstimatorKind::CentralizedFixed:
          case EstimatorKind::CentralizedSequential: {
            if (!have_central) {
              central = centralized_estimates(run.stats, seq ? run.paths.grid.t_end : p,
                                              seq ? std::optional<double>(p) : std::nullopt);
              have_central = true;
            }
            auto it = std::find_if(central.begin(), central.end(), [&](const auto& x) { return x.estimator == kind; });
            if (it == central.end()) throw Error(ErrorKind::HorizonExhausted, "centralized statistic unavailable");
            r = *it;
            break;
          }
          case EstimatorKind::DecentralizedFixed: r = estimate_fixed(state, p); break;
          case EstimatorKind::DecentralizedSequential: r = estimate_sequential(state, p); break;
          case EstimatorKind::TimingOnly: r = estimate_timing_only(state, p); break;
        }
        out.push_back({0, p, r});
      } catch (const Error& err) {
        std::cerr << fmt::format("{} at {}: {}\n", to_string(kind), p, err.what());
      }
    }
  }
  const auto stem = output_stem("estimate", l.text, l.rc.master_seed);
  write_estimates_csv(l.out / (stem + "_estimates.csv"), out);
  for (const auto& r : out)
    fmt::print("{:<26} point={:<10g} value={:.6f}\n", to_string(r.result.estimator), r.gamma_or_t, r.result.value);
  return 0;
}

int cmd_experiment(const Common& c) {
  const auto l = load(c);
  const auto& e = need_experiment(l.rc, "experiment");
  const auto report = run_experiment(e, {c.threads > 0 ? c.threads : default_threads(), false});
  const auto files = write_report(l.out, output_stem("experiment", l.text, e.master_seed), report, l.text);
  for (const auto& a : report.aggregates)
    fmt::print("{:<26} point={:<10g} h={:<8g} n={:<6} mean={:.6f} std.var={:.4f}\n", to_string(a.estimator), a.point,
               a.h, a.n_ok, a.mean, a.std_var);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : files) fmt::print("wrote {}\n", f.string());
  return 0;
}

struct DensityArgs {
  double lambda = 1.0, delta = 1.0, x = 1.0, t_start = 0.01, t_end = 10.0;
  int n = 1000;
  std::string out = "onebit_out";
};

int cmd_density(const DensityArgs& d) {
  std::vector<std::string> bad;
  if (!(d.delta > 0.0)) bad.push_back("delta must be positive");
  if (!(d.x != 0.0)) bad.push_back("x must be nonzero");
  if (!(d.t_start > 0.0 && d.t_end > d.t_start)) bad.push_back("need 0 < t-start < t-end");
  if (d.n < 2) bad.push_back("n must be at least 2");
  if (!bad.empty()) throw ValidationError(bad);
  const ExitProblem p{d.delta, d.x, d.lambda};
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < d.n; ++k) {
    const double t = d.t_start + (d.t_end - d.t_start) * k / (d.n - 1);
    const auto j = joint_density(p, t);
    rows.push_back({t, j.up, j.down});
  }
  const auto file = fs::path(d.out) / fmt::format("density_l{:g}_d{:g}_x{:g}.csv", d.lambda, d.delta, d.x);
  write_table_csv(file, {"t", "p_up", "p_down"}, rows);
  fmt::print("wrote {}\n", file.string());
  return 0;
}

int cmd_suite(const std::vector<std::string>& names, const Common& c) {
  SuiteContext ctx;
  ctx.out_dir = c.out.empty() ? fs::path("onebit_suites") : fs::path(c.out);
  if (c.seed) ctx.seed = *c.seed;
  ctx.threads = c.threads > 0 ? c.threads : default_threads();
  ctx.log = &std::cout;
  std::vector<std::string> run = names;
  if (run.empty() || (run.size() == 1 && run[0] == "all")) run = suite_names();
  for (const auto& n : run)
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
      throw ValidationError({fmt::format("unknown suite '{}'", n)});
  bool ok = true;
  for (const auto& n : run) {
    const auto r = run_suite(n, ctx);
    std::cout << format_result(r) << std::endl;
    ok = ok && r.pass;
  }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"onebit: one-bit decentralized drift estimation"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* s, bool config) {
    if (config) s->add_option("--config", common.config, "YAML run config")->required()->check(CLI::ExistingFile);
    s->add_option("--seed", common.seed, "master seed (overrides the config)");
    s->add_option("--out", common.out, "output directory");
    s->add_option("--threads", common.threads, "worker threads (default ONEBIT_THREADS or all cores)");
  };
  auto* sim = app.add_subcommand("simulate", "write paths and messages for one replication");
  add_common(sim, true);
  auto* est = app.add_subcommand("estimate", "estimate from one replication");
  add_common(est, true);
  auto* exp = app.add_subcommand("experiment", "Monte Carlo experiment");
  add_common(exp, true);

  DensityArgs dens;
  auto* den = app.add_subcommand("density", "tabulate the joint exit-time densities");
  den->add_option("--lambda", dens.lambda);
  den->add_option("--delta", dens.delta);
  den->add_option("--x", dens.x);
  den->add_option("--t-start", dens.t_start);
  den->add_option("--t-end", dens.t_end);
  den->add_option("--n", dens.n);
  den->add_option("--out", dens.out);

  std::vector<std::string> suite_list;
  auto* sui = app.add_subcommand("suite", "run acceptance suites");
  sui->add_option("--name", suite_list, "suite names or 'all'");
  add_common(sui, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*sim) return cmd_simulate(common);
    if (*est) return cmd_estimate(common);
    if (*exp) return cmd_experiment(common);
    if (*den) return cmd_density(dens);
    if (*sui) return cmd_suite(suite_list, common);
  } catch (const ValidationError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
    return 1;
  } catch (const onebit::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::cerr << app.help();
  return 1;
}
