#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "onebit/model.hpp"
#include "onebit/trigger.hpp"

namespace onebit {

/// Fusion-center view of the system, built only from the message log and model metadata.
/// Every evaluation at time t uses messages with time <= t and nothing else.
class FusionState {
 public:
  int sensors() const { return static_cast<int>(b_times_.size()); }
  double horizon() const { return horizon_; }
  const Model& model() const { return model_; }

  /// Delta = sum_i max(delta_up, delta_down).
  double delta_total() const { return delta_total_; }
  /// c = sum_i (1 + d_i) c^i, with c^i = 0 for sensors that never send A-messages.
  double c_total() const { return c_total_; }
  bool uses_a_messages() const { return !model_.info_deterministic(); }

  double tB_i(int i, double t) const;
  double tB(double t) const;
  double tA_i(int i, double t) const;
  double tA(double t) const;
  /// Timing-only information |x_i|^2 * (time of the last B-message); BrownianConstant only.
  double checkA_i(int i, double t) const;
  double checkA(double t) const;

  std::size_t b_messages(double t) const;
  std::size_t a_messages(double t) const;

  /// Sorted times at which tA jumps (A-messages of all sensors).
  std::vector<double> a_jump_times() const;

  const std::vector<double>& b_times(int i) const { return b_times_[static_cast<std::size_t>(i)]; }
  /// b_prefix(i)[n]: tB^i after the first n messages.
  const std::vector<double>& b_prefix(int i) const { return b_prefix_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& a_times(int i) const { return a_times_[static_cast<std::size_t>(i)]; }
  double c(int i) const { return c_[static_cast<std::size_t>(i)]; }

 private:
  friend FusionState reconstruct(const MessageLog&, const Model&, const std::vector<TriggerConfig>&);
  explicit FusionState(Model model) : model_(std::move(model)) {}

  std::size_t b_index(int i, double t) const;
  std::size_t a_index(int i, double t) const;

  Model model_;
  double horizon_ = 0.0;
  std::vector<std::vector<double>> b_times_;
  std::vector<std::vector<double>> b_prefix_;  // tB^i after message n (n >= 1), prefix_[0] = 0
  std::vector<std::vector<double>> a_times_;
  std::vector<double> c_;
  double delta_total_ = 0.0;
  double c_total_ = 0.0;
};

/// Throws Error(InconsistentLog) when the log does not fit the model or the configs.
FusionState reconstruct(const MessageLog& log, const Model& model, const std::vector<TriggerConfig>& cfg);

enum class EstimatorKind {
  CentralizedFixed,
  CentralizedSequential,
  DecentralizedFixed,
  DecentralizedSequential,
  TimingOnly,
};

std::string_view to_string(EstimatorKind kind);
/// Throws Error(InvalidSpec) for unknown names.
EstimatorKind estimator_from_string(std::string_view name);
bool is_sequential(EstimatorKind kind);

struct EstimateResult {
  EstimatorKind estimator = EstimatorKind::CentralizedFixed;
  double value = 0.0;
  std::optional<double> stop_time;
  double info_used = 0.0;
  std::size_t messages_used = 0;
};

/// lambda-tilde_t = tB_t / A_t. Requires deterministic A.
/// Throws Error(ZeroInformation), Error(OutOfHorizon), Error(InvalidSpec).
EstimateResult estimate_fixed(const FusionState& state, double t);

/// Stops at the first t with tA_t >= gamma - c and reports tB/tA there.
/// Throws Error(GammaTooSmall), Error(HorizonExhausted).
EstimateResult estimate_sequential(const FusionState& state, double gamma);

/// lambda-check_t = tB_t / A-check_t. BrownianConstant only.
/// Throws Error(NoMessages), Error(InvalidSpec), Error(OutOfHorizon).
EstimateResult estimate_timing_only(const FusionState& state, double t);

/// Centralized lambda-hat_t = B_t / A_t, and when gamma is given also the sequential
/// version stopped where A first reaches gamma (linear interpolation on the grid).
/// Throws Error(ZeroInformation), Error(HorizonExhausted), Error(OutOfHorizon).
std::vector<EstimateResult> centralized_estimates(const PathStats& stats, double t,
                                                  std::optional<double> gamma = std::nullopt);

struct LogLikelihood {
  double loglik = 0.0;
  double score = 0.0;
};

/// l = lambda B - lambda^2 A / 2, score = B - lambda A.
LogLikelihood centralized_loglik(double lambda, double B_t, double A_t);

}  // namespace onebit
