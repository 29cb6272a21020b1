#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "onebit/first_passage.hpp"
#include "onebit/fusion.hpp"
#include "onebit/model.hpp"
#include "onebit/trigger.hpp"

namespace onebit {

/// Threshold schedule a * v^b, with v the horizon t or the information target gamma.
struct PowerRule {
  double a = 1.0;
  double b = 0.25;

  double operator()(double v) const;
  bool operator==(const PowerRule&) const = default;
};

enum class Regime { FixedHorizon, Sequential, DiscreteSampling };

std::string_view to_string(Regime r);
Regime regime_from_string(std::string_view name);

struct ExperimentConfig {
  ModelSpec model;
  double lambda_true = 1.0;
  Regime regime = Regime::FixedHorizon;
  // Horizons t (FixedHorizon), targets gamma (Sequential) or the single horizon t (DiscreteSampling).
  std::vector<double> points;
  PowerRule delta_rule{1.0, 0.25};
  // Per-sensor A-trigger increment; required when the model's information is random.
  std::optional<PowerRule> c_rule;
  std::vector<double> h_list;  // DiscreteSampling only
  int replications = 2;
  std::uint64_t master_seed = 0;
  std::vector<EstimatorKind> estimators;
  double steps_per_unit = 20.0;
  // Initial simulation horizon for Sequential runs (0: the largest gamma); doubled on exhaustion.
  double horizon = 0.0;
  int max_extensions = 8;
  bool audit = true;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ValidationError listing every problem found.
void validate_experiment(const ExperimentConfig& cfg);

/// Per-sensor trigger configs for one regime point (and sampling period h > 0 in DiscreteSampling).
std::vector<TriggerConfig> triggers_for(const ExperimentConfig& cfg, const Model& model, double point,
                                        double h = 0.0);

struct BoundReport {
  double delta_total = 0.0;
  double c_total = 0.0;
  bool empty_random_set = true;  // no random cross-variation pairs
  double max_B_gap = 0.0;        // max |B - tB|
  double max_A_gap = 0.0;        // max (A - tA)
  double min_A_gap = 0.0;        // min (A - tA)
  std::size_t checked_points = 0;
  std::size_t b_violations = 0;
  std::size_t a_upper_violations = 0;
  std::size_t a_lower_violations = 0;  // counted only when empty_random_set
  std::size_t sensor_violations = 0;   // per-sensor versions of the bounds
  // Diagnostic: points with A < tA although random cross terms exist (no bound applies there).
  std::size_t a_below_diagnostic = 0;

  bool pass() const {
    return b_violations == 0 && a_upper_violations == 0 && a_lower_violations == 0 && sensor_violations == 0;
  }
};

/// Audits the pathwise bounds on the grid up to `until` (the whole grid when empty).
/// Continuous mode: |B^i - tB^i| <= max(delta^i), 0 <= A^i - tA^i <= c^i, |B - tB| <= Delta,
/// A - tA <= c, and 0 <= A - tA when no cross pair is random. DiscreteSampling mode checks
/// B only at sampling instants against delta^i plus the overshoots sent so far.
BoundReport audit_bounds(const PathStats& stats, const FusionState& state, const MessageLog& log,
                         const std::vector<TriggerConfig>& cfg, std::optional<double> until = std::nullopt);

struct ReplicationRow {
  std::uint64_t replication = 0;
  double point = 0.0;
  double h = 0.0;
  EstimatorKind estimator = EstimatorKind::CentralizedFixed;
  std::string failure;  // empty when ok, else the error kind
  double value = 0.0;
  double error = 0.0;
  double standardized = 0.0;
  std::optional<double> stop_time;
  double info_used = 0.0;
  double true_info = 0.0;  // A from the path at the decision time
  std::size_t messages = 0;
  std::vector<std::size_t> sensor_messages;
  double eta_sum = 0.0;
  double eta_sq_sum = 0.0;
  std::size_t eta_count = 0;
  std::optional<double> paired_diff;  // value minus the centralized fixed estimate on the same path

  bool ok() const { return failure.empty(); }
};

struct Aggregate {
  double point = 0.0;
  double h = 0.0;
  EstimatorKind estimator = EstimatorKind::CentralizedFixed;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  double mean = 0.0;
  double variance = 0.0;
  double bias = 0.0;
  double std_mean = 0.0;
  double std_var = 0.0;
  double std_var_se = 0.0;
  std::optional<double> ks_D;
  std::optional<double> ks_p;
  double messages_per_time = 0.0;
  double eta_mean = 0.0;
  double eta_se = 0.0;
  std::size_t eta_count = 0;
  std::optional<double> paired_bias;
  std::optional<double> paired_se;
};

struct AuditSummary {
  double point = 0.0;
  double h = 0.0;
  std::size_t replications = 0;
  std::size_t failing_replications = 0;
  BoundReport worst;  // violation counts summed, gaps at their extremes
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReplicationRow> rows;
  std::vector<Aggregate> aggregates;
  std::vector<AuditSummary> audits;
  std::vector<std::string> warnings;
};

struct RunOptions {
  int threads = 1;
  bool reverse_order = false;
};

/// Deterministic given cfg.master_seed; independent of thread count and execution order.
/// Per-replication failures become flagged rows. Throws ValidationError / Error(InvalidSpec).
ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

/// Recomputes the aggregates from rows (groups in config order).
std::vector<Aggregate> aggregate_rows(const ExperimentConfig& cfg, const std::vector<ReplicationRow>& rows);

struct OvershootRow {
  double h = 0.0;
  double mean_eta = 0.0;
  double se_eta = 0.0;
  double normalized = 0.0;  // mean_eta / h^(1/3)
  double messages = 0.0;    // mean B-messages per replication
  double bias = 0.0;        // mean(lambda-tilde) - lambda
  double paired_bias = 0.0;
  double paired_se = 0.0;
  bool regime_ok = false;  // h^(1/3) < delta / sqrt(t)
};

/// One row per h of a DiscreteSampling experiment (BrownianConstant only).
std::vector<OvershootRow> overshoot_study(const ExperimentConfig& cfg, const RunOptions& opt = {});
std::vector<OvershootRow> overshoot_table(const ExperimentReport& report);

struct ExitSample {
  double time = 0.0;
  int bit = 0;
};

/// Monte Carlo exit times of B from (-delta, delta) on a grid of step dt with a
/// Brownian-bridge crossing correction. Sample i uses its own stream.
std::vector<ExitSample> sample_exit_times(const ExitProblem& p, std::size_t n, double dt, std::uint64_t seed,
                                          const RunOptions& opt = {});

struct RenewalSample {
  std::size_t m = 0;                // messages up to t
  std::vector<double> deltas;       // inter-arrival times up to t
  std::optional<double> excess;     // sum_{j <= m+1} delta_j - t
  double age = 0.0;                 // t - sum_{j <= m} delta_j
  double info_deficit = 0.0;        // A_t - A-check_t
};

/// Single Brownian sensor with symmetric threshold; simulated to t + tail so the next
/// renewal after t is usually observed.
std::vector<RenewalSample> renewal_study(double x, double lambda, double delta, double t, double tail,
                                         double steps_per_unit, int replications, std::uint64_t seed,
                                         const RunOptions& opt = {});

}  // namespace onebit
