#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "onebit/model.hpp"

namespace onebit {

enum class TriggerMode { Continuous, DiscreteSampling };

struct TriggerConfig {
  double delta_up = 1.0;
  double delta_down = 1.0;
  // A-trigger increment; empty when sensor i never sends A-messages.
  std::optional<double> c;
  TriggerMode mode = TriggerMode::Continuous;
  double h = 0.0;  // sampling period, DiscreteSampling only

  double delta_max() const { return delta_up > delta_down ? delta_up : delta_down; }

  bool operator==(const TriggerConfig&) const = default;
};

/// Throws Error(InvalidSpec) when thresholds are not positive or h is not a
/// multiple of the grid step.
void validate_trigger(const TriggerConfig& cfg, const TimeGrid& grid);

struct BMessage {
  double time = 0.0;
  int bit = 0;            // 1: B rose by delta_up, 0: fell by delta_down
  double overshoot = 0.0;  // always 0 in Continuous mode

  bool operator==(const BMessage&) const = default;
};

struct AMessage {
  double time = 0.0;

  bool operator==(const AMessage&) const = default;
};

struct SensorLog {
  std::vector<BMessage> b;
  std::vector<AMessage> a;

  bool operator==(const SensorLog&) const = default;
};

struct MessageLog {
  std::vector<SensorLog> sensors;
  double horizon = 0.0;

  std::size_t b_count() const;
  std::size_t a_count() const;

  bool operator==(const MessageLog&) const = default;
};

std::vector<BMessage> run_b_trigger(const std::vector<double>& b_path, const TimeGrid& grid,
                                    const TriggerConfig& cfg);

/// Empty when c is empty. Throws Error(NonMonotoneInput) when the path decreases.
std::vector<AMessage> run_a_trigger(const std::vector<double>& a_path, const TimeGrid& grid,
                                    std::optional<double> c);

/// Runs both triggers for every sensor. A-triggers only run for sensors with c set.
MessageLog run_triggers(const PathStats& stats, const std::vector<TriggerConfig>& cfg);

struct Renewals {
  std::size_t m = 0;
  std::vector<double> deltas;
  std::vector<int> bits;
};

/// B-message count, inter-arrival times and bits of one sensor up to time t.
/// Throws Error(OutOfHorizon).
Renewals extract_renewals(const MessageLog& log, int sensor, double t);

}  // namespace onebit
