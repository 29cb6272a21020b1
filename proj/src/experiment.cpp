#include "onebit/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "onebit/errors.hpp"
#include "onebit/parallel.hpp"
#include "onebit/rng.hpp"
#include "onebit/stats.hpp"

namespace onebit {

namespace {

constexpr std::array<std::string_view, 3> kRegimeNames{"fixed_horizon", "sequential", "discrete_sampling"};

// Slack for comparisons of quantities summed in different orders.
double slack(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

// h values a given estimator is evaluated at (0 when the estimator ignores h).
std::vector<double> h_values(const ExperimentConfig& cfg, EstimatorKind e) {
  if (cfg.regime == Regime::DiscreteSampling && e != EstimatorKind::CentralizedFixed) return cfg.h_list;
  return {0.0};
}

std::vector<double> audit_h_values(const ExperimentConfig& cfg) {
  if (cfg.regime == Regime::DiscreteSampling) return cfg.h_list;
  return {0.0};
}

struct ReplicationResult {
  std::vector<ReplicationRow> rows;
  std::vector<BoundReport> audits;  // one per (point, audit h), config order
  double horizon = 0.0;
  int extensions = 0;
};

struct HorizonRetry {};

ReplicationRow base_row(std::uint64_t rep, double point, double h, EstimatorKind e) {
  ReplicationRow row;
  row.replication = rep;
  row.point = point;
  row.h = h;
  row.estimator = e;
  return row;
}

void fill_estimate(ReplicationRow& row, const EstimateResult& r, double lambda, double std_scale) {
  row.value = r.value;
  row.error = r.value - lambda;
  row.standardized = std::sqrt(std_scale) * row.error;
  row.stop_time = r.stop_time;
  row.info_used = r.info_used;
  row.messages = r.messages_used;
}

std::vector<std::size_t> sensor_messages(const FusionState& st, double t) {
  std::vector<std::size_t> out;
  for (int i = 0; i < st.sensors(); ++i) {
    const auto& b = st.b_times(i);
    const auto& a = st.a_times(i);
    out.push_back(static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), t) - b.begin()) +
                  static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), t) - a.begin()));
  }
  return out;
}

void add_overshoots(ReplicationRow& row, const MessageLog& log, double t) {
  for (const auto& s : log.sensors)
    for (const auto& m : s.b) {
      if (m.time > t) break;
      row.eta_sum += m.overshoot;
      row.eta_sq_sum += m.overshoot * m.overshoot;
      ++row.eta_count;
    }
}

double grid_horizon(const ExperimentConfig& cfg) {
  const double top = *std::max_element(cfg.points.begin(), cfg.points.end());
  if (cfg.regime == Regime::Sequential) return cfg.horizon > 0.0 ? cfg.horizon : top;
  return top;
}

ReplicationResult run_fixed_like(const ExperimentConfig& cfg, const Model& model, std::uint64_t rep) {
  ReplicationResult res;
  const TimeGrid grid = TimeGrid::with_resolution(grid_horizon(cfg), cfg.steps_per_unit);
  res.horizon = grid.t_end;
  const auto paths = simulate_paths(model, cfg.lambda_true, grid, cfg.master_seed, rep);
  const auto stats = path_statistics(paths, model);
  const double lambda = cfg.lambda_true;

  for (double t : cfg.points) {
    const double a_t = interpolate(stats.A, grid, t);
    std::optional<double> hat;
    try {
      hat = centralized_estimates(stats, t).front().value;
    } catch (const Error&) {
    }
    for (double h : audit_h_values(cfg)) {
      const auto trig = triggers_for(cfg, model, t, h);
      const auto log = run_triggers(stats, trig);
      const auto state = reconstruct(log, model, trig);
      if (cfg.audit) res.audits.push_back(audit_bounds(stats, state, log, trig, t));

      for (EstimatorKind e : cfg.estimators) {
        if (e == EstimatorKind::CentralizedFixed) {
          // Does not depend on h: emit once per horizon.
          if (h != audit_h_values(cfg).front()) continue;
        }
        ReplicationRow row = base_row(rep, t, e == EstimatorKind::CentralizedFixed ? 0.0 : h, e);
        try {
          EstimateResult r;
          switch (e) {
            case EstimatorKind::CentralizedFixed: r = centralized_estimates(stats, t).front(); break;
            case EstimatorKind::DecentralizedFixed: r = estimate_fixed(state, t); break;
            case EstimatorKind::TimingOnly: r = estimate_timing_only(state, t); break;
            default: throw Error(ErrorKind::InvalidSpec, "sequential estimator in a fixed-horizon regime");
          }
          fill_estimate(row, r, lambda, a_t);
          row.true_info = a_t;
          if (e != EstimatorKind::CentralizedFixed) {
            row.sensor_messages = sensor_messages(state, t);
            if (hat) row.paired_diff = r.value - *hat;
            add_overshoots(row, log, t);
          }
        } catch (const Error& err) {
          row.failure = std::string(to_string(err.kind()));
        }
        res.rows.push_back(std::move(row));
      }
    }
  }
  return res;
}

ReplicationResult run_sequential(const ExperimentConfig& cfg, const Model& model, std::uint64_t rep,
                                 double horizon) {
  ReplicationResult res;
  const TimeGrid grid = TimeGrid::with_resolution(horizon, cfg.steps_per_unit);
  res.horizon = grid.t_end;
  const auto paths = simulate_paths(model, cfg.lambda_true, grid, cfg.master_seed, rep);
  const auto stats = path_statistics(paths, model);
  const double lambda = cfg.lambda_true;

  for (double gamma : cfg.points) {
    const auto trig = triggers_for(cfg, model, gamma);
    const auto log = run_triggers(stats, trig);
    const auto state = reconstruct(log, model, trig);
    if (cfg.audit) res.audits.push_back(audit_bounds(stats, state, log, trig));
    for (EstimatorKind e : cfg.estimators) {
      ReplicationRow row = base_row(rep, gamma, 0.0, e);
      try {
        if (e == EstimatorKind::CentralizedSequential) {
          const auto r = centralized_estimates(stats, grid.t_end, gamma).at(1);
          fill_estimate(row, r, lambda, gamma);
          row.true_info = gamma;
        } else if (e == EstimatorKind::DecentralizedSequential) {
          const auto r = estimate_sequential(state, gamma);
          fill_estimate(row, r, lambda, gamma);
          row.true_info = interpolate(stats.A, grid, *r.stop_time);
          row.sensor_messages = sensor_messages(state, *r.stop_time);
        } else {
          throw Error(ErrorKind::InvalidSpec, "fixed-horizon estimator in a sequential regime");
        }
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::HorizonExhausted) throw HorizonRetry{};
        row.failure = std::string(to_string(err.kind()));
      }
      res.rows.push_back(std::move(row));
    }
  }
  return res;
}

// Flags every expected row of a replication that could not be simulated.
ReplicationResult failed_replication(const ExperimentConfig& cfg, std::uint64_t rep, const std::string& kind) {
  ReplicationResult res;
  for (double p : cfg.points)
    for (EstimatorKind e : cfg.estimators)
      for (double h : h_values(cfg, e)) {
        auto row = base_row(rep, p, h, e);
        row.failure = kind;
        res.rows.push_back(std::move(row));
      }
  return res;
}

ReplicationResult run_replication(const ExperimentConfig& cfg, const Model& model, std::uint64_t rep) {
  try {
    if (cfg.regime != Regime::Sequential) return run_fixed_like(cfg, model, rep);
    double horizon = grid_horizon(cfg);
    for (int ext = 0;; ++ext) {
      try {
        auto res = run_sequential(cfg, model, rep, horizon);
        res.extensions = ext;
        return res;
      } catch (const HorizonRetry&) {
        if (ext >= cfg.max_extensions) break;
        // Same stream, longer horizon: the path prefix is unchanged.
        horizon *= 2.0;
      }
    }
    auto res = failed_replication(cfg, rep, std::string(to_string(ErrorKind::HorizonExhausted)));
    res.horizon = horizon;
    res.extensions = cfg.max_extensions;
    return res;
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::InvalidSpec) throw;
    return failed_replication(cfg, rep, std::string(to_string(err.kind())));
  }
}

void merge_bound(BoundReport& acc, const BoundReport& r, bool first) {
  acc.delta_total = r.delta_total;
  acc.c_total = r.c_total;
  acc.empty_random_set = r.empty_random_set;
  acc.max_B_gap = first ? r.max_B_gap : std::max(acc.max_B_gap, r.max_B_gap);
  acc.max_A_gap = first ? r.max_A_gap : std::max(acc.max_A_gap, r.max_A_gap);
  acc.min_A_gap = first ? r.min_A_gap : std::min(acc.min_A_gap, r.min_A_gap);
  acc.checked_points += r.checked_points;
  acc.b_violations += r.b_violations;
  acc.a_upper_violations += r.a_upper_violations;
  acc.a_lower_violations += r.a_lower_violations;
  acc.sensor_violations += r.sensor_violations;
  acc.a_below_diagnostic += r.a_below_diagnostic;
}

}  // namespace

double PowerRule::operator()(double v) const { return a * std::pow(v, b); }

std::string_view to_string(Regime r) { return kRegimeNames[static_cast<std::size_t>(r)]; }

Regime regime_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kRegimeNames.size(); ++i)
    if (kRegimeNames[i] == name) return static_cast<Regime>(i);
  throw Error(ErrorKind::InvalidSpec, fmt::format("unknown regime '{}'", name));
}

void validate_experiment(const ExperimentConfig& cfg) {
  std::vector<std::string> v;
  std::optional<Model> model;
  try {
    model = build_model(cfg.model);
  } catch (const Error& e) {
    v.push_back(fmt::format("model: {}", e.what()));
  }
  if (cfg.replications < 2) v.push_back("experiment.replications: must be at least 2");
  if (!std::isfinite(cfg.lambda_true)) v.push_back("experiment.lambda: must be finite");
  if (cfg.points.empty()) v.push_back("experiment.points: at least one point is required");
  for (double p : cfg.points)
    if (!(p > 0.0)) v.push_back(fmt::format("experiment.points: {} is not positive", p));
  if (!(cfg.steps_per_unit > 0.0)) v.push_back("experiment.steps_per_unit: must be positive");
  if (!(cfg.delta_rule.a > 0.0)) v.push_back("experiment.delta_rule.a: must be positive");
  if (cfg.c_rule && !(cfg.c_rule->a > 0.0)) v.push_back("experiment.c_rule.a: must be positive");
  if (cfg.horizon < 0.0) v.push_back("experiment.horizon: must be nonnegative");
  if (cfg.max_extensions < 0) v.push_back("experiment.max_extensions: must be nonnegative");
  if (cfg.estimators.empty()) v.push_back("experiment.estimators: at least one estimator is required");
  for (EstimatorKind e : cfg.estimators) {
    const bool seq = cfg.regime == Regime::Sequential;
    if (seq != is_sequential(e))
      v.push_back(fmt::format("experiment.estimators: {} does not fit regime {}", to_string(e), to_string(cfg.regime)));
    if (model && e == EstimatorKind::DecentralizedFixed && !model->info_deterministic())
      v.push_back("experiment.estimators: decentralized_fixed needs a model with deterministic information");
    if (model && e == EstimatorKind::TimingOnly && model->kind() != ModelKind::BrownianConstant)
      v.push_back("experiment.estimators: timing_only needs a BrownianConstant model");
  }
  if (std::set<EstimatorKind>(cfg.estimators.begin(), cfg.estimators.end()).size() != cfg.estimators.size())
    v.push_back("experiment.estimators: duplicates");
  if (model && !model->info_deterministic() && !cfg.c_rule)
    v.push_back("experiment.c_rule: required because the model's information is random");
  if (cfg.regime == Regime::DiscreteSampling) {
    if (cfg.points.size() != 1) v.push_back("experiment.points: discrete sampling takes exactly one horizon");
    if (cfg.h_list.empty()) v.push_back("experiment.h_list: required for discrete sampling");
    for (double h : cfg.h_list) {
      const double r = h * cfg.steps_per_unit;
      if (!(h > 0.0) || std::abs(r - std::round(r)) > 1e-6 * std::max(1.0, r) || std::round(r) < 1.0)
        v.push_back(fmt::format("experiment.h_list: {} is not a positive multiple of the grid step", h));
    }
    if (model && !model->info_deterministic())
      v.push_back("model: discrete sampling studies need deterministic information");
  } else if (!cfg.h_list.empty()) {
    v.push_back("experiment.h_list: only used with discrete sampling");
  }
  if (!v.empty()) throw ValidationError(std::move(v));
}

std::vector<TriggerConfig> triggers_for(const ExperimentConfig& cfg, const Model& model, double point, double h) {
  TriggerConfig t;
  t.delta_up = t.delta_down = cfg.delta_rule(point);
  if (!model.info_deterministic() && cfg.c_rule) t.c = (*cfg.c_rule)(point);
  if (h > 0.0) {
    t.mode = TriggerMode::DiscreteSampling;
    t.h = h;
  }
  return std::vector<TriggerConfig>(static_cast<std::size_t>(model.sensors()), t);
}

BoundReport audit_bounds(const PathStats& stats, const FusionState& state, const MessageLog& log,
                         const std::vector<TriggerConfig>& cfg, std::optional<double> until) {
  const TimeGrid& grid = stats.grid;
  const int k = stats.sensors;
  const auto uk = static_cast<std::size_t>(k);
  const Model& model = state.model();
  BoundReport rep;
  rep.delta_total = state.delta_total();
  rep.c_total = state.c_total();
  for (int i = 0; i < k; ++i)
    if (model.random_cross_count(i) > 0) rep.empty_random_set = false;

  std::size_t last = grid.n_steps;
  if (until) last = std::min(last, static_cast<std::size_t>(std::floor(*until / grid.dt() + 1e-9)));

  std::vector<std::size_t> stride(uk, 1);
  bool discrete = false;
  for (std::size_t i = 0; i < uk; ++i)
    if (cfg[i].mode == TriggerMode::DiscreteSampling) {
      discrete = true;
      stride[i] = static_cast<std::size_t>(std::llround(cfg[i].h / grid.dt()));
    }

  std::vector<std::size_t> bi(uk, 0), ai(uk, 0);
  std::vector<double> eta_cum(uk, 0.0);
  const bool random_info = state.uses_a_messages();
  bool first_a = true;

  for (std::size_t step = 0; step <= last; ++step) {
    const double t = grid.time(step);
    double tb = 0.0, eta_all = 0.0;
    bool all_sampled = true;
    for (int i = 0; i < k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto& times = state.b_times(i);
      const auto& msgs = log.sensors[ui].b;
      while (bi[ui] < times.size() && times[bi[ui]] <= t) {
        eta_cum[ui] += msgs[bi[ui]].overshoot;
        ++bi[ui];
      }
      const double tbi = state.b_prefix(i)[bi[ui]];
      tb += tbi;
      eta_all += eta_cum[ui];
      const bool sampled = step % stride[ui] == 0;
      all_sampled = all_sampled && sampled;
      if (sampled) {
        const double gap = std::abs(stats.B_i[ui][step] - tbi);
        const double bound = cfg[ui].delta_max() + eta_cum[ui];
        // Continuous mode is exact by construction; discrete mode sums overshoots in another order.
        const double tol = cfg[ui].mode == TriggerMode::Continuous ? 0.0 : slack(bound + std::abs(stats.B_i[ui][step]));
        if (gap > bound + tol) ++rep.sensor_violations;
      }
      if (random_info) {
        const auto& at = state.a_times(i);
        while (ai[ui] < at.size() && at[ai[ui]] <= t) ++ai[ui];
        const double gap = stats.A_i(i)[step] - static_cast<double>(ai[ui]) * state.c(i);
        if (gap < 0.0 || gap > state.c(i)) ++rep.sensor_violations;
      }
    }
    if (all_sampled) {
      const double gap = std::abs(stats.B[step] - tb);
      rep.max_B_gap = std::max(rep.max_B_gap, gap);
      const double bound = rep.delta_total + (discrete ? eta_all : 0.0);
      if (gap > bound + slack(std::abs(stats.B[step]) + bound)) ++rep.b_violations;
    }
    const double ta = state.tA(t);
    const double agap = stats.A[step] - ta;
    rep.max_A_gap = first_a ? agap : std::max(rep.max_A_gap, agap);
    rep.min_A_gap = first_a ? agap : std::min(rep.min_A_gap, agap);
    first_a = false;
    const double tol = slack(stats.A[step]);
    if (agap > rep.c_total + tol) ++rep.a_upper_violations;
    if (agap < -tol) {
      if (rep.empty_random_set) ++rep.a_lower_violations;
      else ++rep.a_below_diagnostic;
    }
    ++rep.checked_points;
  }
  return rep;
}

std::vector<Aggregate> aggregate_rows(const ExperimentConfig& cfg, const std::vector<ReplicationRow>& rows) {
  std::vector<Aggregate> out;
  for (double p : cfg.points)
    for (EstimatorKind e : cfg.estimators)
      for (double h : h_values(cfg, e)) {
        Aggregate a;
        a.point = p;
        a.h = h;
        a.estimator = e;
        std::vector<double> values, standardized, paired;
        double rate = 0.0, eta_sum = 0.0, eta_sq = 0.0;
        for (const auto& r : rows) {
          if (r.point != p || r.h != h || r.estimator != e) continue;
          if (!r.ok()) {
            ++a.n_failed;
            continue;
          }
          values.push_back(r.value);
          standardized.push_back(r.standardized);
          if (r.paired_diff) paired.push_back(*r.paired_diff);
          const double time = r.stop_time ? *r.stop_time : p;
          if (time > 0.0) rate += static_cast<double>(r.messages) / time;
          eta_sum += r.eta_sum;
          eta_sq += r.eta_sq_sum;
          a.eta_count += r.eta_count;
        }
        a.n_ok = values.size();
        if (a.n_ok > 0) {
          const auto mv = moments(values);
          const auto ms = moments(standardized);
          a.mean = mv.mean;
          a.variance = mv.var;
          a.bias = mv.mean - cfg.lambda_true;
          a.std_mean = ms.mean;
          a.std_var = ms.var;
          a.std_var_se = ms.se_var();
          a.messages_per_time = rate / static_cast<double>(a.n_ok);
          if (a.n_ok >= 8) {
            const auto ks = ks_test(standardized);
            a.ks_D = ks.D;
            a.ks_p = ks.p_value;
          }
        }
        if (a.eta_count > 0) {
          const double n = static_cast<double>(a.eta_count);
          a.eta_mean = eta_sum / n;
          const double var = a.eta_count > 1 ? (eta_sq - n * a.eta_mean * a.eta_mean) / (n - 1.0) : 0.0;
          a.eta_se = std::sqrt(std::max(var, 0.0) / n);
        }
        if (!paired.empty()) {
          const auto mp = moments(paired);
          a.paired_bias = mp.mean;
          a.paired_se = mp.se_mean();
        }
        out.push_back(a);
      }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  validate_experiment(cfg);
  const Model model = build_model(cfg.model);
  const auto n = static_cast<std::size_t>(cfg.replications);
  std::vector<ReplicationResult> slots(n);
  parallel_for(
      n, opt.threads, [&](std::size_t r) { slots[r] = run_replication(cfg, model, static_cast<std::uint64_t>(r)); },
      opt.reverse_order);

  ExperimentReport report;
  report.config = cfg;
  for (std::size_t r = 0; r < n; ++r) {
    auto& s = slots[r];
    report.rows.insert(report.rows.end(), std::make_move_iterator(s.rows.begin()),
                       std::make_move_iterator(s.rows.end()));
    if (s.extensions > 0)
      report.warnings.push_back(
          fmt::format("replication {}: horizon extended {} time(s) to {}", r, s.extensions, s.horizon));
  }
  report.aggregates = aggregate_rows(cfg, report.rows);

  if (cfg.audit) {
    std::size_t idx = 0;
    for (double p : cfg.points)
      for (double h : audit_h_values(cfg)) {
        AuditSummary a;
        a.point = p;
        a.h = h;
        for (std::size_t r = 0; r < n; ++r) {
          if (idx >= slots[r].audits.size()) continue;  // replication failed before auditing
          const auto& b = slots[r].audits[idx];
          merge_bound(a.worst, b, a.replications == 0);
          ++a.replications;
          if (!b.pass()) ++a.failing_replications;
        }
        report.audits.push_back(a);
        ++idx;
      }
  }
  return report;
}

std::vector<OvershootRow> overshoot_table(const ExperimentReport& report) {
  const auto& cfg = report.config;
  std::vector<OvershootRow> out;
  const double t = cfg.points.front();
  const double delta = cfg.delta_rule(t);
  for (double h : cfg.h_list) {
    OvershootRow row;
    row.h = h;
    row.regime_ok = std::cbrt(h) < delta / std::sqrt(t);
    for (const auto& a : report.aggregates) {
      if (a.h != h || a.estimator != EstimatorKind::DecentralizedFixed) continue;
      row.mean_eta = a.eta_mean;
      row.se_eta = a.eta_se;
      row.normalized = a.eta_mean / std::cbrt(h);
      row.messages = a.messages_per_time * t;
      row.bias = a.bias;
      row.paired_bias = a.paired_bias.value_or(std::numeric_limits<double>::quiet_NaN());
      row.paired_se = a.paired_se.value_or(std::numeric_limits<double>::quiet_NaN());
    }
    out.push_back(row);
  }
  return out;
}

std::vector<OvershootRow> overshoot_study(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (cfg.regime != Regime::DiscreteSampling || cfg.model.kind != ModelKind::BrownianConstant)
    throw Error(ErrorKind::InvalidSpec, "overshoot study needs a discrete-sampling BrownianConstant experiment");
  ExperimentConfig c = cfg;
  for (EstimatorKind e : {EstimatorKind::CentralizedFixed, EstimatorKind::DecentralizedFixed})
    if (std::find(c.estimators.begin(), c.estimators.end(), e) == c.estimators.end()) c.estimators.push_back(e);
  return overshoot_table(run_experiment(c, opt));
}

std::vector<ExitSample> sample_exit_times(const ExitProblem& p, std::size_t n, double dt, std::uint64_t seed,
                                          const RunOptions& opt) {
  if (!(p.delta > 0.0) || p.x == 0.0) throw Error(ErrorKind::InvalidSpec, "exit problem needs delta > 0, x != 0");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidSpec, "dt must be positive");
  std::vector<ExitSample> out(n);
  const double x2dt = p.x * p.x * dt;
  const double drift = p.lambda * p.x * p.x * dt;
  const double sd = std::sqrt(x2dt);
  const double d = p.delta;
  parallel_for(
      n, opt.threads,
      [&](std::size_t i) {
        NormalSource normal(replication_stream(seed, i, StreamPurpose::ExitTimeOracle));
        double b = 0.0;
        for (std::uint64_t step = 0;; ++step) {
          const double b1 = b + drift + sd * normal();
          const double t_mid = (static_cast<double>(step) + 0.5) * dt;
          if (b1 >= d || b1 <= -d) {
            out[i] = {t_mid, b1 >= d ? 1 : 0};
            return;
          }
          // Probability that the bridge between b and b1 touched either barrier.
          const double p_up = std::exp(-2.0 * (d - b) * (d - b1) / x2dt);
          const double p_down = std::exp(-2.0 * (d + b) * (d + b1) / x2dt);
          if (p_up > 1e-16 || p_down > 1e-16) {
            const double u = normal.uniform();
            if (u < p_up) {
              out[i] = {t_mid, 1};
              return;
            }
            if (u < p_up + p_down) {
              out[i] = {t_mid, 0};
              return;
            }
          }
          b = b1;
        }
      },
      opt.reverse_order);
  return out;
}

std::vector<RenewalSample> renewal_study(double x, double lambda, double delta, double t, double tail,
                                         double steps_per_unit, int replications, std::uint64_t seed,
                                         const RunOptions& opt) {
  ModelSpec spec;
  spec.kind = ModelKind::BrownianConstant;
  spec.sensors = 1;
  spec.x = {x};
  const Model model = build_model(spec);
  const TimeGrid grid = TimeGrid::with_resolution(t + tail, steps_per_unit);
  TriggerConfig trig;
  trig.delta_up = trig.delta_down = delta;
  std::vector<RenewalSample> out(static_cast<std::size_t>(std::max(replications, 0)));
  parallel_for(
      out.size(), opt.threads,
      [&](std::size_t r) {
        const auto paths = simulate_paths(model, lambda, grid, seed, r);
        const auto stats = path_statistics(paths, model);
        MessageLog log = run_triggers(stats, {trig});
        RenewalSample s;
        const auto ren = extract_renewals(log, 0, t);
        s.m = ren.m;
        s.deltas = ren.deltas;
        const auto& msgs = log.sensors[0].b;
        const double last = ren.m > 0 ? msgs[ren.m - 1].time : 0.0;
        s.age = t - last;
        s.info_deficit = x * x * s.age;
        if (msgs.size() > ren.m) s.excess = msgs[ren.m].time - t;
        out[r] = std::move(s);
      },
      opt.reverse_order);
  return out;
}

}  // namespace onebit
